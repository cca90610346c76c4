#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace zeon;
using namespace testing_support;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string trim(std::string s)
{
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    return s;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

class TempFile {
public:
    TempFile(const std::string& name, const std::string& content)
        : path_(std::filesystem::temp_directory_path() / ("zeon_cli_" + name))
    {
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    std::string path() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

class ScopedEnv {
public:
    ScopedEnv(const char* key, const char* value) : key_(key) { ::setenv(key, value, 1); }
    ~ScopedEnv() { ::unsetenv(key_); }

private:
    const char* key_;
};

const std::string kPhi4 = std::string(ZEON_DATA_DIR) + "/phi4.json";

} // namespace

TEST(Cli, InverseExample)
{
    const auto r = run({"inv", "--n", "1", "1 + z{1}"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(trim(r.out), "1 - z{1}");
}

TEST(Cli, SolveWorkedQuartic)
{
    const auto r = run({"solve", "--n", "4", "--in", kPhi4, "--seed", "3"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(trim(r.out), "3 + 0.5*z{1,2} + 0.5*z{1,3} + 0.5*z{1,4}");
}

TEST(Cli, SolveReportJson)
{
    const auto r = run({"solve", "--in", kPhi4, "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    for (const char* key : {"digest", "spectrum", "zeros", "families", "warnings", "splits"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["spectrum"].size(), 2u);
    EXPECT_EQ(j["zeros"].size(), 1u);
    EXPECT_FALSE(j["splits"].get<bool>());
}

TEST(Cli, QuadraticNoZeros)
{
    const auto r = run({"quad", "--n", "2", "1 + z{1}", "z{1,2} - 2", "1"});
    EXPECT_EQ(r.code, 2);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["error"], "NoZeros");
    EXPECT_EQ(j["outcome"]["kind"], "NoZeros");
}

TEST(Cli, DomainAndUsageErrors)
{
    auto r = run({"inv", "--n", "2", "z{1}"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["error"], "NotInvertible");

    r = run({"solve", "--n", "1", "1; -2; 1", "--seed", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(json::parse(r.out)["error"], "NotSpectrallySimple");

    EXPECT_EQ(run({"inv", "--n", "1", "z{2}"}).code, 1);
    EXPECT_EQ(run({"inv", "1 + z{1}"}).code, 1);
    EXPECT_EQ(run({"inv", "--n", "1"}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"extend", "--n", "1", "--fn", "tan", "z{1}"}).code, 1);
    EXPECT_EQ(run({"inv", "--n", "1", "--in", "/nonexistent/zeon", "1"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, TolerancePrecedence)
{
    // C = 1e-10 is invertible only when eq_eps < 1e-10.
    const std::vector<std::string> base = {"inv", "--n", "1", "1e-10 + z{1}"};
    auto with = [&](std::vector<std::string> extra) {
        auto args = base;
        args.insert(args.end(), extra.begin(), extra.end());
        return run(args).code;
    };
    EXPECT_EQ(with({}), 2);
    EXPECT_EQ(with({"--tol", "1e-12"}), 0);

    const TempFile loose("loose.cfg", "# tolerances\neq_eps = 1e-9\n");
    const TempFile tight("tight.cfg", "eq_eps=1e-12\nprune_eps=1e-15\n");
    {
        const ScopedEnv env("ZEON_TOL", "1e-12");
        EXPECT_EQ(with({}), 0);
        EXPECT_EQ(with({"--config", loose.path()}), 2);
    }
    EXPECT_EQ(with({"--config", tight.path()}), 0);
    EXPECT_EQ(with({"--config", loose.path(), "--tol", "1e-12"}), 0);
    EXPECT_EQ(with({"--config", tight.path(), "--tol", "1e-9"}), 2);

    const TempFile bad("bad.cfg", "eq_eps = 1e-9\nbogus = 3\n");
    EXPECT_EQ(with({"--config", bad.path()}), 1);
    const TempFile inverted("inv.cfg", "eq_eps = 1e-16\n");
    EXPECT_EQ(with({"--config", inverted.path()}), 1);
}

TEST(Cli, OutputsSatisfyLibraryPostconditions)
{
    Gen g(81);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = g.uniform_int(1, 4);
        const Zeon u = g.invertible(n, 0.3);
        const std::string ns = std::to_string(n);
        const std::string text = io::to_text(u, {0});

        auto r = run({"inv", "--n", ns, "--json", text});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_ZEON_NEAR(oracle::mul(io::zeon_from_json(json::parse(r.out)), u), scalar(n, 1.0), 1e-10);

        r = run({"root", "--n", ns, "--k", "3", "--json", text});
        ASSERT_EQ(r.code, 0) << r.err;
        const json roots = json::parse(r.out);
        EXPECT_EQ(roots.size(), 3u);
        for (const auto& root : roots) EXPECT_ZEON_NEAR(oracle::power(io::zeon_from_json(root), 3), u, 1e-8);

        r = run({"root", "--n", ns, "--k", "2", "--principal", text});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_ZEON_NEAR(oracle::power(io::parse_zeon(trim(r.out), n), 2), u, 1e-8);

        const ZeonPoly phi = g.poly(n, 3), psi = g.poly(n, 1);
        r = run({"divide", "--n", ns, "--json", io::to_text(phi, {0}), io::to_text(psi, {0})});
        ASSERT_EQ(r.code, 0) << r.err;
        const json d = json::parse(r.out);
        const auto q = io::poly_from_json(d["quotient"]), rem = io::poly_from_json(d["remainder"]);
        EXPECT_LE(max_abs_diff(psi * q + rem, phi), 1e-9);

        r = run({"eval", "--n", ns, "--json", io::to_text(phi, {0}), text});
        ASSERT_EQ(r.code, 0) << r.err;
        EXPECT_ZEON_NEAR(io::zeon_from_json(json::parse(r.out)), oracle::eval(phi, u), 1e-10);

        const Zeon target = std::exp(0.5) + g.nilpotent(n);
        r = run({"preimage", "--n", ns, "--fn", "exp", "--seed", "0.5", "--json", io::to_text(target, {0})});
        ASSERT_EQ(r.code, 0) << r.err << r.out;
        const Zeon lambda = io::zeon_from_json(json::parse(r.out)["zero"]);
        EXPECT_ZEON_NEAR(extend_eval({functions::exp(), n}, lambda), target, 1e-9);
    }
}

TEST(Cli, SpectralZeroOutputIsAZero)
{
    Gen g(82);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = g.uniform_int(1, 4);
        const Zeon a = 1.0 + g.nilpotent(n), b = -2.0 + g.nilpotent(n);
        const auto phi = ZeonPoly::linear(a) * ZeonPoly::linear(b);
        const auto r = run({"solve", "--n", std::to_string(n), "--seed", "1", "--json", io::to_text(phi, {0})});
        ASSERT_EQ(r.code, 0) << r.err;
        const Zeon lambda = io::zeon_from_json(json::parse(r.out)["zero"]);
        EXPECT_ZEON_NEAR(oracle::eval(phi, lambda), Zeon(n), 1e-9);
    }
}

TEST(Cli, ClassifyMemberExtend)
{
    auto r = run({"classify", "--n", "3", "0; 0; 1; 1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(trim(r.out).rfind("InfinitelyMany (d=2)", 0), 0u);
    r = run({"classify", "--n", "3", "--json", "1; 1"});
    EXPECT_EQ(json::parse(r.out)["result"], "NoNilpotentZeros");
    EXPECT_EQ(run({"classify", "--n", "3", "1; z{1}"}).code, 1);

    EXPECT_EQ(trim(run({"member", "--n", "1", "0.25; 1; 1", "-0.5 + 2*z{1}"}).out), "true");
    EXPECT_EQ(trim(run({"member", "--n", "1", "0; 1; 1", "-1 + z{1}"}).out), "false");

    EXPECT_EQ(trim(run({"extend", "--n", "2", "--fn", "exp", "z{1} + z{2}"}).out), "1 + z{1} + z{2} + z{1,2}");
    EXPECT_EQ(trim(run({"extend", "--n", "1", "--fn", "pow(2)", "3 + z{1}"}).out), "9 + 6*z{1}");
    EXPECT_EQ(trim(run({"extend", "--n", "1", "--fn", "pow:2", "3 + z{1}"}).out), "9 + 6*z{1}");
    EXPECT_EQ(run({"extend", "--n", "1", "--fn", "log", "-1 + z{1}"}).code, 2);
}

TEST(Cli, CosPreimage)
{
    const auto r = run({"preimage", "--n", "4", "--fn", "cos", "--seed", "0.52359877559829887",
                        "0.86602540378443865 + z{1,2} + 3*z{1} - z{4}"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(trim(r.out), "0.523598775598 - 6*z{1} - 2*z{1,2} + 2*z{4} + 20.7846096908*z{1,4} + 6.92820323028*z{1,2,4}");
    const auto bad = run({"preimage", "--n", "4", "--fn", "cos", "--seed", "1.0471975511965976",
                          "0.86602540378443865 + z{1,2} + 3*z{1} - z{4}"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(json::parse(bad.out)["error"], "SeedMismatch");
}

TEST(Cli, InputFileForms)
{
    const TempFile text("terms.txt", "1 + z{1}\n\n");
    EXPECT_EQ(trim(run({"inv", "--n", "1", "--in", text.path()}).out), "1 - z{1}");
    const TempFile arr("terms.json", R"([{"n":2,"terms":[{"index":[],"re":1,"im":0},{"index":[1],"re":1,"im":0}]}, "z{1,2} - 2", "1"])");
    const auto r = run({"quad", "--n", "2", "--in", arr.path()});
    EXPECT_EQ(r.code, 2);
    const TempFile broken("broken.json", R"({"n":2,)");
    EXPECT_EQ(run({"solve", "--in", broken.path()}).code, 1);
}

TEST(Cli, BatchPreservesOrder)
{
    std::string script = "# comment\n";
    std::vector<std::string> expect;
    for (int k = 1; k <= 12; ++k) {
        script += "inv --n 1 \"" + std::to_string(k) + " + z{1}\"\n";
        expect.push_back(io::to_text(inverse(scalar(1, k) + z(1, {1}))));
    }
    script += "zeon inv --n 1 'z{1}'\n";
    const TempFile batch("batch.txt", script);
    const auto r = run({"--batch", batch.path()});
    EXPECT_EQ(r.code, 2);
    const auto out = lines(r.out);
    ASSERT_EQ(out.size(), expect.size() + 1);
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(out[i], expect[i]);
    EXPECT_EQ(json::parse(out.back())["error"], "NotInvertible");
}
