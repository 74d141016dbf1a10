// Exit-status and file-output contract of the command-line tool.
// Usage: test_cli <path-to-poissoncap-binary>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "poissoncap/sweep.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run(const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <binary>\n";
        return 2;
    }
    const std::string bin = argv[1];

    expect(run(bin + " solve --amplitude 3 --dark-current 0 --output cli_a3.csv") == 0,
           "solve A=3 exits 0");
    {
        const auto records = poissoncap::from_csv(slurp("cli_a3.csv"));
        expect(records.size() == 1, "solve writes one record");
        expect(!records.empty() && records[0].n_points == 2,
               "A=3 record has a binary support");
        expect(!records.empty() && records[0].converged, "A=3 record converged");
    }

    expect(run(bin + " solve --amplitude 0 --output cli_a0.csv") == 0,
           "solve A=0 exits 0");
    {
        const auto records = poissoncap::from_csv(slurp("cli_a0.csv"));
        expect(!records.empty() && records[0].capacity_nats == 0.0 &&
                   records[0].n_points == 1,
               "A=0 gives zero capacity and a single point");
    }

    expect(run(bin + " solve --amplitude 3 --epsilon -1") == 1,
           "negative epsilon exits 1");
    expect(run(bin + " solve --amplitude -2") == 1, "negative amplitude exits 1");
    expect(run(bin + " solve") == 1, "missing required flag exits 1");
    expect(run(bin + " sweep --sweep amplitude --grid nonsense --output x.csv") == 1,
           "malformed grid exits 1");

    expect(run(bin + " sweep --sweep amplitude --fixed 0 --grid 3:3:1,lin"
                     " --output cli_sweep1.csv") == 0,
           "one-value sweep exits 0");
    {
        const auto single = poissoncap::from_csv(slurp("cli_a3.csv"));
        const auto swept = poissoncap::from_csv(slurp("cli_sweep1.csv"));
        expect(single.size() == 1 && swept.size() == 1 &&
                   single[0].capacity_nats == swept[0].capacity_nats &&
                   single[0].n_points == swept[0].n_points,
               "one-value sweep matches single solve");
        expect(!slurp("cli_sweep1.csv.manifest.json").empty(),
               "sweep writes a manifest");
    }

    expect(run(bin + " sweep --sweep amplitude --fixed 0 --grid 1:4:3,lin"
                     " --format json --output cli_sweep.json --plot-script") == 0,
           "small amplitude sweep (json) exits 0");
    {
        const auto records = poissoncap::from_json(slurp("cli_sweep.json"));
        expect(records.size() == 3, "json sweep has 3 records");
        expect(!slurp("cli_sweep.json.plot.py").empty(), "plot script emitted");
    }

    // Identical command lines give byte-identical data files.
    expect(run(bin + " solve --amplitude 2 --dark-current 1 --output cli_d1.csv") == 0,
           "solve A=2 lambda=1 exits 0");
    expect(run(bin + " solve --amplitude 2 --dark-current 1 --output cli_d2.csv") == 0,
           "repeat run exits 0");
    expect(slurp("cli_d1.csv") == slurp("cli_d2.csv"),
           "repeated runs are byte-identical");

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
