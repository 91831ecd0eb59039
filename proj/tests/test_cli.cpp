#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace
{
    struct RunResult
    {
        int status;
        std::string out;
    };

    // run the binary through the shell, capture stdout, discard stderr
    RunResult run_cli(const std::string& args, const std::string& env_prefix = "")
    {
        std::string cmd = env_prefix + std::string(VLAB_CLI_PATH) + " " + args + " 2>/dev/null";
        FILE* f = popen(cmd.c_str(), "r");
        REQUIRE(f != nullptr);
        std::string out;
        char buf[4096];
        size_t n;
        while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
        int rc = pclose(f);
        return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
    }

    nlohmann::json parse(const std::string& s) { return nlohmann::json::parse(s); }

    std::string write_temp(const std::string& name, const std::string& text)
    {
        std::string path = std::string("/tmp/vlab_cli_") + name;
        std::ofstream os(path, std::ios::binary);
        os << text;
        return path;
    }
}

TEST_CASE("cli: omitted-generator golden run", "[cli]")
{
    auto r = run_cli("valence --p 3 --e 1 --r 2 --example-31 2");
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("verdict") == true);
    CHECK(j.at("lhs_interior") == "1/4");
    CHECK(j.at("lhs_boundary") == "0/1");
    CHECK(j.at("rhs") == "1/4");
    CHECK(j.at("family").at("q") == 3);
    CHECK(j.at("family").at("generators") == "g");
}

TEST_CASE("cli: valence csv output", "[cli]")
{
    auto r = run_cli("valence --p 3 --e 1 --r 2 --example-31 2 --format csv");
    REQUIRE(r.status == 0);
    auto nl = r.out.find('\n');
    REQUIRE(nl != std::string::npos);
    CHECK(r.out.substr(0, nl) == "family,weights,lhs_interior,lhs_boundary,rhs,verdict");
    std::string row = r.out.substr(nl + 1);
    CHECK(row.rfind("g,", 0) == 0);
    CHECK(row.find(",1/4,0/1,1/4,true") != std::string::npos);
}

TEST_CASE("cli: missing form file exits 2", "[cli]")
{
    auto r = run_cli("valence --p 2 --e 1 --r 2 --forms /nonexistent/missing.json");
    CHECK(r.status == 2);
}

TEST_CASE("cli: form file round trip", "[cli]")
{
    // the family {g_1} over q = 2, r = 2: one generator exponent (1,0), coefficient 1
    std::string path = write_temp("fam.json", R"({
      "q": 2, "r": 2, "generators": "g",
      "forms": [ { "terms": [ { "coeff": [[1]], "exps": [1, 0] } ] } ]
    })");
    auto r = run_cli("valence --p 2 --e 1 --r 2 --forms " + path);
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("verdict") == true);
    CHECK(j.at("rhs") == "1/3");

    // same file against the wrong field
    auto wrong = run_cli("valence --p 3 --e 1 --r 2 --forms " + path);
    CHECK(wrong.status == 2);

    std::string bad = write_temp("bad.json", "not json at all");
    CHECK(run_cli("valence --p 2 --e 1 --r 2 --forms " + bad).status == 2);

    // two identical members: parses fine, fails the independence check
    std::string dep = write_temp("dep.json", R"({
      "q": 2, "r": 3, "generators": "g",
      "forms": [ { "terms": [ { "coeff": [[1]], "exps": [1, 0, 0] } ] },
                 { "terms": [ { "coeff": [[1]], "exps": [1, 0, 0] } ] } ]
    })");
    CHECK(run_cli("valence --p 2 --e 1 --r 3 --forms " + dep).status == 2);
}

TEST_CASE("cli: random families are deterministic", "[cli]")
{
    std::string args = "valence --p 2 --e 1 --r 2 --random --count 2 --seed 7";
    auto a = run_cli(args);
    auto b = run_cli(args);
    REQUIRE(a.status == 0);
    CHECK(a.status == b.status);
    CHECK(a.out == b.out);
    auto j = parse(a.out);
    CHECK(j.at("verdict") == true);
    CHECK(j.at("families").size() == 2);

    // --out writes the same bytes the stdout path produces
    std::string path = "/tmp/vlab_cli_out.json";
    auto c = run_cli(args + " --out " + path);
    REQUIRE(c.status == 0);
    std::ifstream is(path, std::ios::binary);
    std::string file_text((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
    CHECK(file_text == a.out);
}

TEST_CASE("cli: seed env fallback and flag override", "[cli]")
{
    std::string base = "valence --p 2 --e 1 --r 2 --random --count 1";
    auto flag = run_cli(base + " --seed 7");
    auto env = run_cli(base, "VALENCE_LAB_SEED=7 ");
    CHECK(flag.out == env.out);
    auto override_env = run_cli(base + " --seed 7", "VALENCE_LAB_SEED=9 ");
    CHECK(override_env.out == flag.out);
    auto other = run_cli(base + " --seed 8");
    CHECK(other.out != flag.out);
}

TEST_CASE("cli: lattice count golden run", "[cli]")
{
    auto r = run_cli("eisenstein count --p 2 --e 1 --r 2 --n 3");
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("lhs") == "1/1");
    CHECK(j.at("rhs") == "1/1");
    CHECK(j.at("verdict") == true);

    auto csv = run_cli("eisenstein count --p 2 --e 1 --r 2 --n 3 --format csv");
    REQUIRE(csv.status == 0);
    CHECK(csv.out.rfind("q,r,n,s,count,orbits\n", 0) == 0);
}

TEST_CASE("cli: lattice zero locus and scan", "[cli]")
{
    auto r = run_cli("eisenstein zero-locus --p 2 --e 1 --r 2 --n 2");
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("zeros").size() == 2);
    CHECK(j.at("verdict") == true);
    CHECK(j.at("jacobians_nonzero") == true);
    CHECK(j.at("scan_bound") == 4);   // defaulted to 2n

    auto s = run_cli("eisenstein scan --p 2 --e 1 --r 2 --scan-bound 4");
    REQUIRE(s.status == 0);
    auto js = parse(s.out);
    CHECK(js.at("classes_checked") == "20");
    CHECK(js.at("windows_checked") == "60");
    CHECK(js.at("counterexample").is_null());
    CHECK(js.at("verdict") == true);
}

TEST_CASE("cli: stabilizer and group orders", "[cli]")
{
    auto r = run_cli("stabilizer --p 2 --e 1 --r 3 --support 1,2");
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("match") == true);
    CHECK(j.at("order") == j.at("brute_order"));

    auto g = run_cli("group-orders --p 7 --e 1 --r 3");
    REQUIRE(g.status == 0);
    auto jg = parse(g.out);
    CHECK(jg.at("expected_index") == 3);
    CHECK(jg.at("match") == true);
}

TEST_CASE("cli: argument errors exit 2", "[cli]")
{
    CHECK(run_cli("").status == 2);                                     // no subcommand
    CHECK(run_cli("valence --p 2 --e 1 --r 2").status == 2);            // no mode chosen
    CHECK(run_cli("valence --p 2 --e 1 --r 2 --random --example-31 1").status == 2);
    CHECK(run_cli("valence --p 2 --e 1 --r 2 --random --bogus-flag").status == 2);
    CHECK(run_cli("eisenstein count --p 2 --e 1 --r 2").status == 2);   // missing --n
    CHECK(run_cli("group-orders --p 2 --e 1 --r 2 --format csv").status == 2);
    CHECK(run_cli("eisenstein count --p 2 --e 1 --r 2 --n 3 --format yaml").status == 2);
}

TEST_CASE("cli: cap violations exit 3", "[cli]")
{
    CHECK(run_cli("eisenstein count --p 2 --e 1 --r 2 --n 13").status == 3);
    CHECK(run_cli("eisenstein zero-locus --p 2 --e 1 --r 2 --n 6 --scan-bound 6 --size-cap 32")
              .status == 3);
}

TEST_CASE("cli: selftest battery", "[cli]")
{
    auto r = run_cli("selftest --seed 3");
    REQUIRE(r.status == 0);
    auto j = parse(r.out);
    CHECK(j.at("verdict") == true);
    for (const auto& s : j.at("suites")) {
        CHECK(s.at("checks").get<uint64_t>() > 0);
        CHECK(s.at("failures").empty());
    }
}
