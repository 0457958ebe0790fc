#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "qcs/json_io.hpp"
#include "qcs/qcsheaf.hpp"
#include "suite.hpp"

using namespace qcs;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

int file_counter = 0;

RunResult run_cli_process(const std::string& args, const std::string& input) {
    std::string cmd = std::string("'") + QCS_CLI_PATH + "' " + args;
    std::string path;
    if (!input.empty()) {
        path = "cli_case_" + std::to_string(file_counter++) + ".json";
        std::ofstream(path) << input;
        cmd += " --input " + path;
    }
    cmd += " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    if (!path.empty()) std::remove(path.c_str());
    return r;
}

const char* kSquareModel = R"({"factors": [2, 2], "frobenius": [[1, 0], [0, 1]]})";

} // namespace

TEST_CASE("total cohomology summary is byte stable") {
    std::string expect =
        "{\n"
        "  \"classes\": 8,\n"
        "  \"consistent\": true,\n"
        "  \"kernel\": 2,\n"
        "  \"quotient\": 4,\n"
        "  \"schema_version\": 1\n"
        "}\n";
    RunResult a = run_cli_process("coh total", kSquareModel);
    CHECK(a.code == 0);
    CHECK(a.out == expect);
    RunResult b = run_cli_process("coh total", kSquareModel);
    CHECK(b.out == a.out);
}

TEST_CASE("cohomology of a plain group") {
    RunResult r = run_cli_process("coh h2", R"({"factors": [2, 4]})");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("classes") == 2);
    CHECK(j.at("factors") == Json::array({2}));
    CHECK(j.at("schema_version") == 1);
}

TEST_CASE("malformed input exits with a domain error payload") {
    RunResult r = run_cli_process("coh h2", "this is not json");
    CHECK(r.code == 1);
    Json j = Json::parse(r.out);
    CHECK(j.at("error").at("code") == "cli.input");
    CHECK(j.at("schema_version") == 1);
}

TEST_CASE("semantic errors also use the error payload") {
    // factors violating the divisibility chain
    RunResult r = run_cli_process("coh h2", R"({"factors": [4, 2]})");
    CHECK(r.code == 1);
    Json j = Json::parse(r.out);
    CHECK(j.at("error").at("code") == "json");
}

TEST_CASE("usage errors exit with code 2 and help exits clean") {
    RunResult bogus = run_cli_process("frobnicate", "");
    CHECK(bogus.code == 2);
    RunResult help = run_cli_process("--help", "");
    CHECK(help.code == 0);
    RunResult missing = run_cli_process("qc", "");
    CHECK(missing.code == 2); // subcommand required
}

TEST_CASE("validation reports violations without failing the process") {
    std::string sheaf = R"({
      "base": {"factors": [2], "frobenius": [[1]]},
      "a": {"0,0": "0/1", "0,1": "0/1", "1,0": "0/1", "1,1": "1/3"},
      "b": {"0": "1/2", "1": "0/1"}
    })";
    RunResult r = run_cli_process("qc validate", sheaf);
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("valid") == false);
    CHECK(j.at("violations").size() > 0);
    bool saw_norm = false;
    for (const Json& v : j.at("violations"))
        if (v.at("kind") == "normalization") saw_norm = true;
    CHECK(saw_norm);
}

TEST_CASE("isomorphism witness round trips through the library") {
    std::string pair = R"({
      "first": {
        "base": {"factors": [4], "frobenius": [[3]]},
        "a": {"0,0": "0/1", "0,1": "0/1", "0,2": "0/1", "0,3": "0/1",
              "1,0": "0/1", "1,1": "0/1", "1,2": "0/1", "1,3": "0/1",
              "2,0": "0/1", "2,1": "0/1", "2,2": "0/1", "2,3": "0/1",
              "3,0": "0/1", "3,1": "0/1", "3,2": "0/1", "3,3": "0/1"},
        "b": {"0": "0/1", "1": "0/1", "2": "0/1", "3": "0/1"}
      },
      "second": {
        "base": {"factors": [4], "frobenius": [[3]]},
        "a": {"0,0": "0/1", "0,1": "0/1", "0,2": "0/1", "0,3": "0/1",
              "1,0": "0/1", "1,1": "0/1", "1,2": "0/1", "1,3": "0/1",
              "2,0": "0/1", "2,1": "0/1", "2,2": "0/1", "2,3": "0/1",
              "3,0": "0/1", "3,1": "0/1", "3,2": "0/1", "3,3": "0/1"},
        "b": {"0": "0/1", "1": "1/2", "2": "0/1", "3": "1/2"}
      }
    })";
    RunResult r = run_cli_process("qc iso", pair);
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j.at("isomorphic") == true);
    REQUIRE(j.at("witness").is_object());

    // rebuild both sheaves and apply the witness in process
    Json in = Json::parse(pair);
    QCSheafModel q1 = sheaf_from_json(in.at("first"));
    QCSheafModel q2 = sheaf_from_json(in.at("second"));
    SheafOps ops(q1.base);
    std::vector<QZ> delta(ops.size());
    for (auto it = j.at("witness").begin(); it != j.at("witness").end(); ++it) {
        std::vector<Int> x{Int(it.key())};
        delta[ops.idx.index(q1.base.points.reduce(x))] = QZ::parse(it.value().get<std::string>());
    }
    QCSheafModel carried = twist(q1, delta);
    CHECK(carried.a == q2.a);
    CHECK(carried.b == q2.b);
}

TEST_CASE("distinct classes yield an obstruction") {
    std::string pair = R"({
      "first": {
        "base": {"factors": [2, 2], "frobenius": [[1, 0], [0, 1]]},
        "a": {"0,0,0,0": "0/1", "0,0,0,1": "0/1", "0,0,1,0": "0/1", "0,0,1,1": "0/1",
              "0,1,0,0": "0/1", "0,1,0,1": "0/1", "0,1,1,0": "0/1", "0,1,1,1": "0/1",
              "1,0,0,0": "0/1", "1,0,0,1": "1/2", "1,0,1,0": "0/1", "1,0,1,1": "1/2",
              "1,1,0,0": "0/1", "1,1,0,1": "1/2", "1,1,1,0": "0/1", "1,1,1,1": "1/2"},
        "b": {"0,0": "0/1", "0,1": "0/1", "1,0": "0/1", "1,1": "0/1"}
      },
      "second": {
        "base": {"factors": [2, 2], "frobenius": [[1, 0], [0, 1]]},
        "a": {"0,0,0,0": "0/1", "0,0,0,1": "0/1", "0,0,1,0": "0/1", "0,0,1,1": "0/1",
              "0,1,0,0": "0/1", "0,1,0,1": "0/1", "0,1,1,0": "0/1", "0,1,1,1": "0/1",
              "1,0,0,0": "0/1", "1,0,0,1": "0/1", "1,0,1,0": "0/1", "1,0,1,1": "0/1",
              "1,1,0,0": "0/1", "1,1,0,1": "0/1", "1,1,1,0": "0/1", "1,1,1,1": "0/1"},
        "b": {"0,0": "0/1", "0,1": "0/1", "1,0": "0/1", "1,1": "0/1"}
      }
    })";
    RunResult r = run_cli_process("qc iso", pair);
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("isomorphic") == false);
    CHECK(j.at("witness").is_null());
    CHECK(j.at("obstruction_row").get<int>() >= 0);
}

TEST_CASE("text mode flattens the output object") {
    std::string sheaf = R"({
      "base": {"factors": [4], "frobenius": [[1]]},
      "a": {"0,0": "0/1", "0,1": "0/1", "0,2": "0/1", "0,3": "0/1",
            "1,0": "0/1", "1,1": "0/1", "1,2": "0/1", "1,3": "0/1",
            "2,0": "0/1", "2,1": "0/1", "2,2": "0/1", "2,3": "0/1",
            "3,0": "0/1", "3,1": "0/1", "3,2": "0/1", "3,3": "0/1"},
      "b": {"0": "0/1", "1": "0/1", "2": "0/1", "3": "0/1"}
    })";
    RunResult r = run_cli_process("qc trace --text", sheaf);
    REQUIRE(r.code == 0);
    CHECK(r.out == "factors: [4]\nschema_version: 1\nvalues: [\"0/1\"]\n");
}

TEST_CASE("torus commands agree with the library") {
    RunResult comp = run_cli_process(
        "torus component", R"({"rank": 1, "inertia": [[[-1]]], "frob": [[1]]})");
    REQUIRE(comp.code == 0);
    Json cj = Json::parse(comp.out);
    CHECK(cj.at("factors") == Json::array({2}));

    RunResult cnt = run_cli_process(
        "torus count",
        R"({"lattice": {"rank": 2, "inertia": [], "frob": [[1, 0], [0, 1]]},
            "ring": {"kind": "laurent", "q": 2, "level": 2}})");
    REQUIRE(cnt.code == 0);
    Json nj = Json::parse(cnt.out);
    CHECK(nj.at("order") == 16);
    CHECK(nj.at("factors") == Json::array({4, 4}));

    RunResult lv = run_cli_process(
        "torus levels", R"({"ring": {"kind": "p-adic", "p": 3, "level": 1}, "high_level": 2})");
    REQUIRE(lv.code == 0);
    Json lj = Json::parse(lv.out);
    CHECK(lj.at("ok") == true);
    CHECK(lj.at("kernel_order") == 3);
}

TEST_CASE("classification and smooth reports run end to end") {
    RunResult cls = run_cli_process("qc classify", R"({"factors": [5], "frobenius": [[2]]})");
    REQUIRE(cls.code == 0);
    Json cj = Json::parse(cls.out);
    CHECK(cj.at("total") == 1);
    CHECK(cj.at("cross_checked") == true);
    CHECK(cj.at("sections_multiplicative") == true);

    RunResult sm = run_cli_process(
        "smooth report",
        R"({"identity_component": {"factors": [3]},
            "components": {"factors": [2, 2], "frobenius": [[1, 0], [0, 1]]}})");
    REQUIRE(sm.code == 0);
    Json sj = Json::parse(sm.out);
    CHECK(sj.at("qciso_order") == 24);
    CHECK(sj.at("kernel").at("torsion") == Json::array({2}));
    CHECK(sj.at("aut").at("torsion") == Json::array({2, 2}));
    CHECK(sj.at("sequence").at("rational_order") == 12);
    CHECK(sj.at("cross_checked") == true);
}
