#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
    std::string out;
    int code = 0;
};

Run run(const std::string& args) {
    std::string cmd = std::string(ORBITLAB_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Run r;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_tmp(const std::string& name, const std::string& body) {
    std::string path = std::string(ORBITLAB_TMP) + "/" + name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("zero matrix has zero invariants") {
    std::string f = write_tmp("zero.json", "[[0,0,0],[0,0,0],[0,0,0]]");
    Run r = run("invariants --A " + f);
    CHECK(r.code == 0);
    CHECK(r.out == "{\"a\":[\"0\",\"0\"],\"base\":\"Q\",\"cusp\":\"disc-zero-forced\",\"e\":\"0\",\"f\":[\"1\",\"0\",\"0\",\"0\"],\"n\":3,\"rs\":false}\n");
}

TEST_CASE("smallonetwo density is an exact fraction") {
    Run r = run("census sweep --p 5 --n 3 --lemma smallonetwo");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["densities"]["smallonetwo"] == "2/125");
    CHECK(j["total"] == 125);
    CHECK(j["densities"].size() == 2);
}

TEST_CASE("construct echoes invariants over F_5") {
    Run r = run("--base f5 orbit construct --f 1,4,1,4 --e 2");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["invariants"] == j["requested"]);
    CHECK(j["A"].size() == 3);
    CHECK(j["stabilizer"]["order"] == 4);
    CHECK(j["witness1"] == "found");
}

TEST_CASE("output is byte identical across runs") {
    std::string args = "--threads 2 census sweep --p 11 --n 3";
    CHECK(run(args).out == run(args).out);
    CHECK(run(args).out == run("census sweep --p 11 --n 3").out);
}

TEST_CASE("csv export") {
    Run r = run("--format csv census sweep --pmax 7");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("p,n,total,", 0) == 0);
    CHECK(r.out.find("\n5,3,125,0,") != std::string::npos);
}

TEST_CASE("heights stream ends with a summary") {
    Run r = run("heights --X 1 --n 3");
    CHECK(r.code == 0);
    CHECK(r.out == "{\"a\":[\"0\",\"0\"],\"base\":\"Q\",\"e\":\"0\",\"f\":[\"1\",\"0\",\"0\",\"0\"],\"n\":3,\"rs\":false}\n"
                   "{\"X\":\"1\",\"box\":\"1\",\"count\":1,\"n\":3,\"summary\":true}\n");
}

TEST_CASE("error paths return stable codes") {
    struct Case {
        std::string args, code;
        int exit;
    };
    std::vector<Case> cases = {
        {"census sweep --p 5 --frob", "usage", 2},
        {"orbit construct --f 1,x,3 --e 1", "usage", 2},
        {"orbit construct --f 1,2 --e 1", "usage", 2},
        {"invariants --A /nonexistent.json", "usage", 2},
        {"orbit construct --f 1,0,-7,35 --e 6", "domain", 3},
        {"--base F:4 invariants --A /nonexistent.json", "unsupported", 3},
        {"orbit construct --f 1,0,-1,1 --e 1 --nu -1", "precondition", 3},
        {"--base Qp:2:3 orbit construct --f 1,0,-1,1 --e 1", "precision", 4},
        {"census orbits --p 11", "budget", 5},
    };
    for (const auto& c : cases) {
        Run r = run(c.args);
        CAPTURE(c.args);
        CHECK(r.code == c.exit);
        json j = json::parse(r.out);
        CHECK(j["error"]["code"] == c.code);
        CHECK(j["error"]["exit"] == c.exit);
    }
}

TEST_CASE("descent over the reals") {
    Run r = run("descent local --f 1,14,49,36 --e 6 --place R --curve C1");
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["size"] == 2);
    CHECK(j["complete"] == true);
}
