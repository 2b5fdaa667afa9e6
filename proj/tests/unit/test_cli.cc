#include <doctest.h>

#include "cli.hh"

#include <lllmt/instance_io.hh>
#include <lllmt/serialization.hh>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lllmt;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

auto call(std::vector<std::string> args) -> Outcome
{
    std::ostringstream out, err;
    int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

auto data(const std::string & name) -> std::string { return std::string(LLLMT_TEST_DATA) + "/" + name; }

auto scratch(const std::string & name) -> std::string
{
    auto dir = std::filesystem::temp_directory_path() / "lllmt-cli-test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}

TEST_CASE("check exit codes")
{
    auto ok = call({"check", data("two_events.inst"), "--json"});
    CHECK(ok.code == cli::exit_ok);
    auto j = json::parse(ok.out);
    CHECK(j["report"]["satisfied"] == true);
    CHECK(j["report"]["events"][0]["mu"].get<double>() == doctest::Approx(0.5).epsilon(1e-6));
    auto back = report_from_json(j["report"]);
    CHECK(back.events.size() == 2);

    auto bad = call({"check", data("complementary.inst")});
    CHECK(bad.code == cli::exit_unsatisfied);
    CHECK(bad.out.find("not satisfied") != std::string::npos);

    auto broken = call({"check", data("malformed.inst")});
    CHECK(broken.code == cli::exit_input);
    CHECK(broken.err.find("line 4") != std::string::npos);

    CHECK(call({"check", data("absent.inst")}).code == cli::exit_input);
    CHECK(call({"check", data("two_events.inst"), "--criterion", "shearer"}).code == cli::exit_input);
    CHECK(call({"check"}).code == cli::exit_input);
    CHECK(call({"frobnicate"}).code == cli::exit_input);
    CHECK(call({}).code == cli::exit_input);
}

TEST_CASE("check with weights from a file")
{
    auto path = scratch("mu.txt");
    {
        std::ofstream f(path);
        f << "0.5 0.5\n";
    }
    CHECK(call({"check", data("two_events.inst"), "--mu", path}).code == cli::exit_ok);
    {
        std::ofstream f(path);
        f << "0.1 0.1\n";
    }
    CHECK(call({"check", data("two_events.inst"), "--mu", path}).code == cli::exit_unsatisfied);
    {
        std::ofstream f(path);
        f << "0.1\n";
    }
    CHECK(call({"check", data("two_events.inst"), "--mu", path}).code == cli::exit_input);
}

TEST_CASE("hypergraph table")
{
    auto r = call({"table-hypergraph", "--c", "2", "--kmin", "4", "--kmax", "11", "--json"});
    REQUIRE(r.code == cli::exit_ok);
    auto j = json::parse(r.out);
    std::vector<std::size_t> L, Lp;
    for (auto & row : j["rows"]) {
        L.push_back(row["L"]);
        Lp.push_back(row["L_original"]);
    }
    CHECK(L == std::vector<std::size_t>{2, 3, 5, 8, 13, 23, 40, 72});
    CHECK(Lp == std::vector<std::size_t>{2, 3, 4, 7, 12, 21, 38, 69});
    auto text = call({"table-hypergraph"});
    CHECK(text.out.find("72") != std::string::npos);
}

TEST_CASE("bounds")
{
    auto r = call({"bounds", "--ksat", "--k", "6", "--json"});
    REQUIRE(r.code == cli::exit_ok);
    auto j = json::parse(r.out);
    CHECK(j["L_new"].get<double>() == doctest::Approx(8.24005).epsilon(1e-5));
    CHECK(j["L_gst"].get<double>() == doctest::Approx(6.72694).epsilon(1e-5));
    CHECK(j["L"] == 8);
    auto t = json::parse(call({"bounds", "--transversal", "--delta", "2", "--json"}).out);
    CHECK(t["b"] == 7);
    auto h = json::parse(call({"bounds", "--hypergraph", "--k", "10", "--json"}).out);
    CHECK(h["L"] == 40);
    CHECK(h["L_original"] == 38);
    CHECK(call({"bounds"}).code == cli::exit_input);
    CHECK(call({"bounds", "--ksat", "--ramsey"}).code == cli::exit_input);
}

TEST_CASE("solvers")
{
    auto sat = call({"solve-sat", data("small.cnf"), "--json", "--assignment"});
    CHECK(sat.code == cli::exit_ok);
    auto sj = json::parse(sat.out);
    CHECK(sj["satisfied"] == true);
    CHECK(sj["assignment"].size() == 3);
    CHECK(call({"solve-sat", "--generate", "--json"}).code == cli::exit_ok);
    CHECK(call({"solve-sat"}).code == cli::exit_input);

    auto log = scratch("sat.jsonl");
    CHECK(call({"solve-sat", "--generate", "--n", "60", "--k", "4", "--L", "2", "--log", log}).code == cli::exit_ok);
    std::ifstream lf(log);
    std::string first;
    std::getline(lf, first);
    CHECK(json::parse(first).contains("initial"));

    CHECK(call({"solve-hypergraph", "--generate"}).code == cli::exit_ok);
    CHECK(call({"solve-transversal", "--graph", data("c6.graph"), "--partition", data("c6.partition")}).code == cli::exit_ok);
    CHECK(call({"solve-transversal", "--generate"}).code == cli::exit_ok);
    CHECK(call({"solve-hamiltonian", "--generate", "--n", "100"}).code == cli::exit_ok);
    auto ram = call({"solve-ramsey", "--n", "12", "--s", "3", "--t", "4", "--json"});
    CHECK(ram.code == cli::exit_ok);
    CHECK(json::parse(ram.out).contains("blue_bound"));
    auto seq = call({"solve-ramsey", "--n", "12", "--s", "3", "--sequential", "--json"});
    CHECK(seq.code == cli::exit_ok);
}

TEST_CASE("parallel simulation, statistics and packing")
{
    auto trace = scratch("trace.jsonl");
    for (auto mode : {"full", "simplified", "hybrid"}) {
        auto r = call({"simulate-parallel", data("two_events.inst"), "--mode", mode, "--trace", trace, "--check-heights", "--json"});
        CHECK(r.code == cli::exit_ok);
        auto j = json::parse(r.out);
        CHECK(j["mode"] == mode);
    }
    CHECK(call({"simulate-parallel", data("complementary.inst"), "--max-rounds", "20"}).code == cli::exit_unsatisfied);
    CHECK(call({"simulate-parallel", data("two_events.inst"), "--mode", "quantum"}).code == cli::exit_input);

    auto stats = call({"stats", data("two_events.inst"), "--runs", "200", "--target", "(0,1)", "--json"});
    CHECK(stats.code == cli::exit_ok);
    CHECK(json::parse(stats.out).contains("within_bounds"));
    CHECK(call({"stats", data("two_events.inst"), "--target", "(0,0) (1,0)"}).code == cli::exit_input);

    auto pack = call({"pack", data("triangle.hg"), "--algorithm", "randomized", "--json"});
    CHECK(pack.code == cli::exit_ok);
    auto pj = json::parse(pack.out);
    CHECK(pj["feasible"] == true);
    CHECK(pj["maximal"] == true);
    CHECK(call({"pack", data("triangle.hg"), "--eps", "0.9"}).code == cli::exit_input);
}

TEST_CASE("seeded output is deterministic and --out matches stdout")
{
    auto path = scratch("out.json");
    auto a = call({"solve-sat", "--generate", "--seed", "5", "--json", "--out", path});
    auto b = call({"solve-sat", "--generate", "--seed", "5", "--json"});
    auto ja = json::parse(a.out), jb = json::parse(b.out);
    ja["run"].erase("wall_seconds");
    jb["run"].erase("wall_seconds");
    CHECK(ja == jb);
    std::ifstream f(path);
    auto jf = json::parse(f);
    jf["run"].erase("wall_seconds");
    CHECK(jf == ja);
}
