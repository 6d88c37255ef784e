// End-to-end tests of the volclust executable: exit codes, determinism,
// pipelines and golden reports. Set VOLCLUST_UPDATE_GOLDEN=1 to rewrite the
// golden files after an intentional format change.

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("volclust_cli_" + std::string(info->name()) + "_" +
                                            std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Runs `volclust <args>` inside the scratch directory.
    CliRun run(const std::string& args, const std::string& stdin_file = {}) {
        const fs::path err = dir_ / "stderr.txt";
        std::string cmd = "cd '" + dir_.string() + "' && '" VOLCLUST_CLI "' " + args;
        if (!stdin_file.empty()) cmd += " < " + stdin_file;
        cmd += " 2> '" + err.string() + "'";
        CliRun r;
        FILE* pipe = ::popen(cmd.c_str(), "r");
        if (!pipe) return r;
        char buf[4096];
        for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
        const int status = ::pclose(pipe);
        r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = slurp(err);
        return r;
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream(dir_ / name, std::ios::binary) << content;
    }

    void expect_golden(const std::string& name, const std::string& actual) {
        const fs::path golden = fs::path(VOLCLUST_GOLDEN_DIR) / name;
        if (const char* u = std::getenv("VOLCLUST_UPDATE_GOLDEN"); u && std::string(u) == "1") {
            std::ofstream(golden, std::ios::binary) << actual;
            return;
        }
        ASSERT_TRUE(fs::exists(golden)) << golden;
        EXPECT_EQ(actual, slurp(golden)) << "golden mismatch: " << name;
    }

    fs::path dir_;
};

constexpr const char* kSimGarch =
    "simulate --family garch --omega 0.05 --alpha 0.1 --beta 0.85 --nu 6 --n 1500 --seed 11";
constexpr const char* kSimFigarch =
    "simulate --family figarch --omega 0.05 --alpha -0.3 --beta 0.5 --d 0.6 --n 1500 --seed 12";

}  // namespace

TEST_F(Cli, SimulateWritesTheRequestedLength) {
    auto r = run("simulate --family garch --omega 1e-6 --alpha 0.08 --beta 0.91 --n 50000 --seed 7 --output a.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("# volclust"), std::string::npos);  // manifest on stdout
    std::istringstream in(slurp(dir_ / "a.csv"));
    std::size_t lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 50001u);
}

TEST_F(Cli, SimulateIsByteIdenticalAcrossRuns) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    ASSERT_EQ(run(std::string(kSimGarch) + " --output b.csv").status, 0);
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
    auto piped = run(kSimGarch);
    EXPECT_EQ(piped.out, slurp(dir_ / "a.csv"));
    EXPECT_NE(piped.err.find("# volclust"), std::string::npos);  // manifest on stderr
}

TEST_F(Cli, SimulateRejectsInfeasibleParameters) {
    auto r = run("simulate --family figarch --omega 0.1 --alpha 0.1 --beta 0.3 --d 1.2 --n 100");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("d must lie in [0,1]"), std::string::npos) << r.err;
    r = run("simulate --family garch --omega 0.1 --alpha 0.5 --beta 0.6");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("alpha + beta"), std::string::npos) << r.err;
}

TEST_F(Cli, FitRejectsFixedDAtOne) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto r = run("fit --family figarch --d-fixed 1 --input a.csv --returns");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("--family igarch"), std::string::npos) << r.err;
}

TEST_F(Cli, EmptyInputHasNoObservations) {
    write("empty.csv", "");
    auto r = run("fit --input empty.csv");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("no observations"), std::string::npos) << r.err;
    r = run("entropy --input empty.csv");
    EXPECT_EQ(r.status, 1);
}

TEST_F(Cli, MalformedInputExitsOne) {
    write("bad.csv", "date,close\n2002-06-03,100\n2002-06-04,x\n");
    auto r = run("entropy --input bad.csv");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    EXPECT_EQ(run("entropy --input missing.csv").status, 1);
    EXPECT_EQ(run("fit --input a.csv --family egarch").status, 1);
    EXPECT_EQ(run("frobnicate").status, 1);
}

TEST_F(Cli, EntropyWarnsOutsideTheTsallisRange) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto r = run("entropy --input a.csv --returns --q 0.5");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
    EXPECT_NE(r.err.find("0.5"), std::string::npos);
}

TEST_F(Cli, EntropySingleBinIsZero) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto r = run("entropy --input a.csv --returns --bins 1 --format tree");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["table"].size(), 7u);  // Shannon, 3 Renyi, 3 Tsallis
    for (const auto& row : j["table"]) EXPECT_EQ(row["values"][0].get<double>(), 0.0);
}

TEST_F(Cli, EntropyDegenerateSeriesExitsOne) {
    std::string text = "date,return\n";
    for (int d = 10; d < 30; ++d) text += "2000-01-" + std::to_string(d) + ",0.01\n";
    write("flat.csv", text);
    EXPECT_EQ(run("entropy --input flat.csv --returns").status, 1);
}

TEST_F(Cli, PricesAreConvertedToReturns) {
    write("p.csv", "Date,Close\n2002-06-03,100\n2002-06-04,110\n2002-06-05,99\n");
    auto r = run("entropy --input p.csv --date-col Date --price-col Close --format tree");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["n_obs"][0], 2);
}

TEST_F(Cli, SimulatePipesIntoFitAndEntropy) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto fit = run("fit --family garch --input - --returns --format tree", "a.csv");
    EXPECT_EQ(fit.status, 0) << fit.err;
    EXPECT_NE(fit.out.find("\"report\": \"fit\""), std::string::npos);
    auto ent = run("entropy --input - --returns", "a.csv");
    EXPECT_EQ(ent.status, 0) << ent.err;
}

TEST_F(Cli, GlobalOptionsMayFollowTheSubcommand) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto a = run("--format tree --input a.csv --returns entropy");
    auto b = run("entropy --format tree --input a.csv --returns");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, WindowedEntropy) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output a.csv").status, 0);
    auto r = run("entropy --input a.csv --returns --window 500 --step 250 --bits");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("Renyi(1.45)"), std::string::npos);
    EXPECT_NE(r.out.find("units: bits"), std::string::npos);
    std::istringstream in(r.out);
    std::size_t rows = 0;
    for (std::string l; std::getline(in, l);) rows += l.starts_with("a ");
    EXPECT_EQ(rows, 5u);  // windows starting at 0, 250, ..., 1000
}

TEST_F(Cli, FitGridMatchesGolden) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output garch_path.csv").status, 0);
    ASSERT_EQ(run(std::string(kSimFigarch) + " --output figarch_path.csv").status, 0);
    const std::string args =
        "fit --family garch,igarch,figarch --input garch_path.csv,figarch_path.csv --returns";
    auto text = run(args);
    EXPECT_TRUE(text.status == 0 || text.status == 2) << text.err;
    expect_golden("fit_grid.txt", text.out);
    auto tree = run(args + " --format tree");
    expect_golden("fit_grid.json", tree.out);
    EXPECT_EQ(tree.out, run(args + " --format tree").out);
}

TEST_F(Cli, EntropyMatchesGolden) {
    ASSERT_EQ(run(std::string(kSimGarch) + " --output garch_path.csv").status, 0);
    ASSERT_EQ(run(std::string(kSimFigarch) + " --output figarch_path.csv").status, 0);
    const std::string args = "entropy --input garch_path.csv,figarch_path.csv --returns";
    auto text = run(args);
    ASSERT_EQ(text.status, 0) << text.err;
    expect_golden("entropy.txt", text.out);
    expect_golden("entropy.json", run(args + " --format tree").out);
}
