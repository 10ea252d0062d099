#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"

#include "cycloid/net.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace {

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cycloid::cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("info prints the derived metrics") {
    RunResult r = run({"info", "4", "3", "3", "3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "C(4,3,3,3): A=21 p=7 n=7 regular=yes\n"
                   "forward cycles: 3 of length 7, 1 token(s) each\n"
                   "backward cycles: 1 of length 21, 4 token(s) each\n"
                   "coregular: no\n"
                   "minimal cycle: 6 (formula_c)\n");

    r = run({"info", "4", "2", "2", "3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("C(4,2,2,3): A=16 n=6 regular=no\n", 0) == 0);

    r = run({"info", "4", "3", "3", "3", "--json"});
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["area"] == 21);
    CHECK(j["process_len"] == 7);
    CHECK(j["min_cycle"] == 6);
    CHECK(j["min_cycle_source"] == "formula_c");
}

TEST_CASE("normalize prints the canonical representative") {
    RunResult r = run({"normalize", "4", "3", "3", "3", "--", "-2", "-2"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "(1,1)\n");

    r = run({"normalize", "4", "3", "3", "3", "--json", "--", "-2", "-2"});
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["m"] == 0);
    CHECK(j["n_steps"] == -1);
    CHECK(j["representative"][0] == 1);
    CHECK(j["representative"][1] == 1);
}

TEST_CASE("equiv reports truth through the exit code") {
    RunResult r = run({"equiv", "4", "3", "3", "3", "--", "-2", "-2", "1", "1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "true\n");

    r = run({"equiv", "4", "2", "2", "3", "0", "0", "1", "0"});
    CHECK(r.exit_code == 1);
    CHECK(r.out == "false\n");
}

TEST_CASE("build summarises the synthesized system") {
    RunResult r = run({"build", "3", "2", "1", "4", "--fold", "total"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "C(3,2,1,4) fold=total: 14 transitions, 21 places, 56 arcs\n"
                   "marking: 5 token(s) on 5 place(s)\n");

    r = run({"build", "4", "2", "2", "3", "--marking", "standard"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "C(4,2,2,3): 16 transitions, 32 places, 64 arcs\n"
                   "marking: 6 token(s) on 6 place(s)\n");
}

TEST_CASE("fold lists the classes in regular labels") {
    RunResult r = run({"fold", "3", "2", "1", "4"});
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::vector<std::string> all;
    while (std::getline(lines, line)) all.push_back(line);
    REQUIRE(all.size() == 7);
    CHECK(all[0] == "S[0] = { s'[0,0] s'[5,1] }");
    CHECK(all[6].find("s'[6,0]") != std::string::npos);
    CHECK(all[6].find("s'[4,1]") != std::string::npos);

    r = run({"fold", "2", "3", "4", "6", "--fold", "0,2"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("s'[5,0]") != std::string::npos);
    CHECK(r.out.find("s'[2,2]") != std::string::npos);
}

TEST_CASE("stop and delete summaries") {
    RunResult r = run({"stop", "2", "3"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "C(2,3,3,3) fold=total: 18 transitions (3 stop), 20 places, 66 arcs\n"
                   "marking: 5 token(s) on 5 place(s)\n");

    r = run({"stop", "3", "2", "4", "4", "--force"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("C(3,2,4,4) fold=total:", 0) == 0);

    r = run({"stop", "3", "2", "4", "4"});
    CHECK(r.exit_code == 2); // needs --force

    using namespace cycloid;
    Net folded = backward_fold(attach_regular_labels(synthesize({2, 3, 4, 6})), FoldSpec{{0, 2}});
    Net survivor = delete_process(folded, 2);
    std::ostringstream expected;
    expected << "C(2,3,4,6) fold=0,2: " << survivor.transitions.size() << " transitions, "
             << survivor.places.size() << " places, " << survivor.arcs.size() << " arcs\n"
             << "marking: 0 token(s) on 0 place(s)\n";
    r = run({"delete", "2", "3", "4", "6", "--fold", "0,2", "--process", "2"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == expected.str());
}

TEST_CASE("check exit codes follow the verdict") {
    RunResult r = run({"check", "3", "2", "1", "4", "--fold", "total", "--property", "safe"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("holds: yes") != std::string::npos);

    r = run({"check", "2", "4", "2", "4", "--fold", "total", "--property", "safe"});
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("holds: no") != std::string::npos);
    CHECK(r.out.find("witness:") != std::string::npos);

    r = run({"check", "2", "4", "2", "4", "--fold", "total", "--property", "safe",
             "--max-states", "5"});
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("inconclusive") != std::string::npos);

    r = run({"check", "4", "3", "3", "3", "--property", "live"});
    CHECK(r.exit_code == 0);

    r = run({"check", "3", "2", "1", "4", "--fold", "total", "--property", "bisim"});
    CHECK(r.exit_code == 0);

    r = run({"check", "2", "4", "2", "4", "--fold", "total", "--property", "bisim"});
    CHECK(r.exit_code == 1);

    r = run({"check", "2", "4", "2", "4", "--property", "weird"});
    CHECK(r.exit_code == 2);

    r = run({"check", "--property", "safe"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("scenario walks the stop-and-delete pipeline") {
    RunResult r = run({"scenario", "2", "3", "1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "step 1: C(2,3,3,3) -> C(3,2,2,2): iso=yes safe=yes live=yes\n"
                   "scenario: holds\n");

    r = run({"scenario", "2", "3", "2"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("(degenerate)") != std::string::npos);

    r = run({"scenario", "2", "3", "5"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("iso compares synthesized nets") {
    RunResult r = run({"iso", "3", "2", "1", "4", "2", "3", "4", "1"});
    CHECK(r.exit_code == 0);
    CHECK(r.out == "isomorphic: yes (42 nodes mapped)\n");

    r = run({"iso", "4", "3", "3", "3", "3", "2", "1", "4"});
    CHECK(r.exit_code == 1);
    CHECK(r.out.rfind("isomorphic: no\n", 0) == 0);

    r = run({"iso", "6", "6", "6", "6", "6", "6", "6", "6"});
    CHECK(r.exit_code == 3); // node budget exceeded
}

TEST_CASE("export and re-import through the check command") {
    RunResult r = run({"export", "1", "1", "1", "1", "--format", "dot", "--marking", "standard"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("digraph \"C(1,1,1,1)\"") == 0);

    const std::string path = "cli_test_net.json";
    r = run({"export", "3", "2", "1", "4", "--fold", "total", "--format", "json", "-o", path});
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());

    r = run({"check", "--from", path, "--property", "safe"});
    CHECK(r.exit_code == 0);

    // Hand-edit the marking to a multiset; import accepts it, safety flags it.
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto j = nlohmann::ordered_json::parse(buffer.str());
    for (auto& [key, value] : j["marking"].items()) {
        value = 2;
        break;
    }
    std::ofstream outf(path);
    outf << j.dump(2);
    outf.close();
    r = run({"check", "--from", path, "--property", "safe"});
    CHECK(r.exit_code == 1);
    std::remove(path.c_str());

    r = run({"export", "2", "3", "3", "3", "--stop", "--format", "pnml"});
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("tstop[0]") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).exit_code == 2);
    CHECK(run({"info", "4", "3", "3"}).exit_code == 2);
    CHECK(run({"info", "0", "3", "3", "3"}).exit_code == 2);
    CHECK(run({"frobnicate"}).exit_code == 2);
    RunResult help = run({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("info") != std::string::npos);
}

TEST_CASE("command output is byte deterministic") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"info", "4", "3", "3", "3"},
          std::vector<std::string>{"check", "2", "4", "2", "4", "--fold", "total", "--property",
                                   "safe"},
          std::vector<std::string>{"export", "3", "2", "1", "4", "--fold", "total", "--format",
                                   "json"},
          std::vector<std::string>{"scenario", "2", "3", "2"}}) {
        RunResult a = run(args);
        RunResult b = run(args);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
}
