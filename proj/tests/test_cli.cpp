#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lowzero/cli.hpp"

using namespace lowzero;
using namespace lowzero::cli;

namespace {

struct Outcome {
    int code;
    std::string out, err;
    io::Json json() const { return io::Json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "lowzero");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto p = std::filesystem::temp_directory_path() / ("lowzero_test_" + name);
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST(Cli, MomentReproducesPublishedValue) {
    const auto o = invoke({"moment", "--sigma", "1/2", "--n", "4", "--sign", "minus"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j["results"][0]["exact"], "31/105");
    EXPECT_NEAR(j["results"][0]["approx"].get<double>(), 31.0 / 105, 1e-15);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["params"]["a"], 2);
    EXPECT_TRUE(j.contains("timing"));
}

TEST(Cli, FloatLiteralIsUsageError) {
    const auto o = invoke({"moment", "--sigma", "0.6"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("0.6"), std::string::npos);
    EXPECT_NE(o.err.find("exact literal"), std::string::npos) << o.err;
}

TEST(Cli, UnsupportedSupportIsUsageExit) {
    EXPECT_EQ(invoke({"moment", "--sigma", "3/5", "--n", "4"}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
}

TEST(Cli, CrosscheckPasses) {
    const auto o = invoke({"crosscheck", "--n", "4", "--sigma", "1/2"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    for (const auto& r : j["results"]) {
        EXPECT_EQ(r["R_moment"]["exact"], r["Q_via_classes"]["exact"]);
        EXPECT_TRUE(r["pass"].get<bool>());
    }
}

TEST(Cli, VerifyCombinatPasses) {
    const auto o = invoke({"verify", "combinat", "--n", "5", "--a", "2"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.json()["status"], "pass");
}

TEST(Cli, VanishReportsComparison) {
    const auto o = invoke({"vanish", "--r", "5", "--n", "4", "--sigma", "1/2", "--sign", "minus"});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = o.json();
    EXPECT_EQ(j["results"][0]["exact"], "496/65625");
    EXPECT_EQ(j["results"][0]["threshold"]["exact"], "5/2");
    EXPECT_EQ(j["results"][1]["improves"], true);
    EXPECT_EQ(j["results"][2]["improves"], true);
}

TEST(Cli, RmtEmbedsSeedAndIsReproducible) {
    const auto csv = std::filesystem::temp_directory_path() / "lowzero_test_z.csv";
    const std::vector<std::string> args{"rmt", "--M", "20", "--samples", "300", "--sigma", "1/4", "--seed", "7", "--csv", csv.string()};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_NE(a.code, 2) << a.err;
    auto ja = a.json(), jb = b.json();
    EXPECT_EQ(ja["params"]["seed"], 7);
    EXPECT_EQ(ja["params"]["parity"], "even");
    EXPECT_EQ(ja["results"], jb["results"]);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "sample_index,Z");
    int rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 300);
}

TEST(Cli, JsonFileWritten) {
    const auto path = std::filesystem::temp_directory_path() / "lowzero_test_report.json";
    std::filesystem::remove(path);
    const auto o = invoke({"--json", path.string(), "vanish"});
    ASSERT_EQ(o.code, 0) << o.err;
    std::ifstream in(path);
    const auto j = io::Json::parse(in);
    EXPECT_EQ(j["results"][0]["exact"], "496/65625");
}

TEST(Config, Parsing) {
    std::istringstream empty("");
    EXPECT_TRUE(parse_config(empty).values.empty());
    std::istringstream ok("# comment\nsigma = 3/5   # trailing\n\nn=2\n");
    const auto cfg = parse_config(ok);
    EXPECT_EQ(cfg.rational("sigma", 0), Rational(3, 5));
    EXPECT_EQ(cfg.count("n", 0), 2u);
    std::istringstream bad("sigma = 0.6\n");
    EXPECT_THROW(parse_config(bad), UsageError);
    std::istringstream unknown("n = 2\nfoo = 1\n");
    try {
        parse_config(unknown, "cfg");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg:2"), std::string::npos) << e.what();
    }
    std::istringstream dup("n = 2\nn = 3\n");
    EXPECT_THROW(parse_config(dup), UsageError);
    std::istringstream notint("n = two\n");
    EXPECT_THROW(parse_config(notint), UsageError);
    std::istringstream noeq("sigma 1/2\n");
    EXPECT_THROW(parse_config(noeq), UsageError);
}

TEST(Config, FileWithCommandLineDefaults) {
    const auto empty = temp_file("empty.cfg", "");
    const auto o = invoke({"--config", empty.string(), "moment"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.json()["results"][0]["exact"], "31/105");
    const auto full = temp_file("full.cfg", "command = moment\nsigma = 3/5\nn = 2\nsign = plus\n");
    const auto p = invoke({"--config", full.string()});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(p.json()["results"][0]["exact"], "325/972");
    const auto bad = temp_file("bad.cfg", "sigma = 0.6\n");
    EXPECT_EQ(invoke({"--config", bad.string(), "moment"}).code, 2);
    EXPECT_EQ(invoke({"--config", "/nonexistent/lowzero.cfg", "moment"}).code, 2);
}

TEST(Config, EmbeddedParamsReproduceRun) {
    const auto first = invoke({"moment", "--sigma", "2/7", "--n", "3", "--sign", "plus"}).json();
    std::string body;
    body += "command = " + first["command"].get<std::string>() + "\n";
    for (const auto& [k, v] : first["params"].items()) {
        if (k == "tf") continue;
        body += k + " = " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    }
    const auto again = invoke({"--config", temp_file("replay.cfg", body).string()});
    ASSERT_EQ(again.code, 0) << again.err << body;
    EXPECT_EQ(again.json()["results"], first["results"]);
}

TEST(Json, PiecewiseRoundTrip) {
    const auto p = convolve(fejer(Rational(2, 7)).fhat, fejer(Rational(1, 3)).fhat);
    EXPECT_EQ(io::piecewise_from_json(io::to_json(p)), p);
    EXPECT_THROW(io::piecewise_from_json(io::Json{{"breakpoints", 3}}), UsageError);
    EXPECT_EQ(io::exact(Rational(1, 3))["exact"], "1/3");
    EXPECT_EQ(io::exact(Rational(1, 3))["approx"].get<double>(), 0.333333333333333);
}
