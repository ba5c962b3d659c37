// Exit-code and output contract of the command-line tool, exercised through
// real process invocations.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%-58s %s\n", what.c_str(), ok ? "ok" : "FAIL");
    if (!ok) ++failures;
}

int run(const std::string& args, const std::string& redirect = "> /dev/null 2>&1") {
    const std::string cmd = std::string(NETMAX_CLI_PATH) + " " + args + " " + redirect;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    const std::string config = std::string(NETMAX_CONFIG_DIR) + "/quickstart.json";

    expect(run("run --config " + config + " --out cli_smoke") == 0, "run exits 0 on a valid config");
    expect(!slurp("cli_smoke.trace.jsonl").empty(), "run writes the trace");

    write_file("cli_smoke_bad.json", "{ not json");
    expect(run("run --config cli_smoke_bad.json") == 1, "run exits 1 on malformed JSON");
    expect(run("run --config does_not_exist.json") == 1, "run exits 1 on a missing file");

    // seed override is echoed into the summary
    expect(run("run --config " + config + " --seed 7 --out cli_smoke7") == 0, "run accepts --seed");
    expect(slurp("cli_smoke7.summary.json").find("\"seed\": 7") != std::string::npos,
           "summary echoes the overridden seed");

    write_file("cli_smoke_times.json", "[[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]");
    expect(run("policy --times cli_smoke_times.json --alpha 0.1") == 0,
           "policy exits 0 on a valid matrix");

    // Two-node matrix: the optimizer saturates the single link.
    write_file("cli_smoke_two.json", "[[0,1],[1,0]]");
    expect(run("policy --times cli_smoke_two.json --alpha 0.1 --outer 8 --inner 8",
               "> cli_smoke_policy.json 2>/dev/null") == 0,
           "policy exits 0 on the two-node matrix");
    {
        const std::string out = slurp("cli_smoke_policy.json");
        const bool swap = out.find("\"rho\"") != std::string::npos &&
                          out.find("\"lambda2\"") != std::string::npos &&
                          out.find("1.0") != std::string::npos;
        expect(swap, "policy output carries the swap-policy fields");
    }
    expect(run("policy --times cli_smoke_times.json --alpha 0.1 --outer 1") == 3,
           "policy exits 3 when every grid point is infeasible");
    write_file("cli_smoke_rect.json", "[[0,1],[1,0],[0,1]]");
    expect(run("policy --times cli_smoke_rect.json") == 1, "policy exits 1 on a non-square matrix");

    expect(run("compare --config " + config +
               " --override compare.protocols=[\\\"netmax\\\"]") == 1,
           "compare exits 1 with fewer than two protocols");
    expect(run("compare --config " + config +
               " --override compare.seed_count=2") == 0,
           "compare exits 0 on a two-protocol sweep");

    expect(run("verify --suite policy --quick") == 0, "verify policy suite exits 0");
    expect(run("verify --suite policy --quick --lp-margin -1") == 4,
           "verify exits 4 with an injected fault");

    for (const char* f : {"cli_smoke.trace.jsonl", "cli_smoke.summary.json",
                          "cli_smoke7.trace.jsonl", "cli_smoke7.summary.json",
                          "cli_smoke_bad.json", "cli_smoke_times.json", "cli_smoke_rect.json",
                          "cli_smoke_two.json", "cli_smoke_policy.json"})
        std::remove(f);

    if (failures == 0) {
        std::printf("cli smoke: all checks passed\n");
        return 0;
    }
    std::printf("cli smoke: %d failure(s)\n", failures);
    return 1;
}
