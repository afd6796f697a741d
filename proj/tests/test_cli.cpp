#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "polaron_cli_tests";

int run(const std::string& args)
{
    fs::create_directories(kWork);
    const std::string cmd = "cd '" + kWork.string() + "' && '" POLARON_CLI_PATH "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

// Data rows of a CSV, split on commas; comment lines and the column line are skipped.
std::vector<std::vector<std::string>> rows(const fs::path& p)
{
    std::istringstream in(slurp(p));
    std::vector<std::vector<std::string>> out;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

const std::string kSmall = "--bath.lambda=2 --bath.num_modes=12 --model.delta=0.05 ";

} // namespace

TEST_CASE("solve with one polaron reports the Silbey-Harris coherence")
{
    fs::remove_all(kWork / "sh");
    REQUIRE(run("solve " + kSmall + "--solver.N_max=1 --outputs.directory=sh") == 0);
    const auto r = rows(kWork / "sh" / "coherence.csv");
    REQUIRE(r.size() == 1);
    CHECK(r[0][1] == "1");
    CHECK(r[0][5] == "ok");
    CHECK(std::stod(r[0][3]) == doctest::Approx(std::stod(r[0][4]) / 0.05).epsilon(1e-7));
    CHECK(fs::exists(kWork / "sh" / "displacements.csv"));
    CHECK(fs::exists(kWork / "sh" / "report.json"));
}

TEST_CASE("reruns are byte-identical for any job count")
{
    const std::string args = "solve " + kSmall + "--bath.alpha_list=[0.3,0.5] --solver.N_max=3 --outputs.directory=rr";
    fs::remove_all(kWork / "rr");
    REQUIRE(run(args + " -j 1") == 0);
    const auto first = snapshot(kWork / "rr");
    REQUIRE(run(args + " -j 2") == 0);
    CHECK(snapshot(kWork / "rr") == first);
    CHECK(first.count("displacements_alpha_0.3.csv") == 1);

    const auto r = rows(kWork / "rr" / "coherence.csv");
    REQUIRE(r.size() == 6);
    for (std::size_t i = 1; i < 3; ++i) CHECK(std::stod(r[i][2]) <= std::stod(r[i - 1][2]));
}

TEST_CASE("configuration file and overrides")
{
    fs::create_directories(kWork);
    std::ofstream(kWork / "cfg.json") << R"({"bath":{"lambda":2,"num_modes":10},"solver":{"N_max":2},)"
                                         R"("outputs":{"directory":"from_file"}})";
    fs::remove_all(kWork / "from_file");
    REQUIRE(run("solve -c cfg.json --model.delta 0.05") == 0);
    CHECK(rows(kWork / "from_file" / "coherence.csv").size() == 2);
    CHECK(slurp(kWork / "from_file" / "coherence.csv").find("\"delta\":0.05") != std::string::npos);
}

TEST_CASE("exit codes")
{
    fs::create_directories(kWork);
    std::ofstream(kWork / "bad.json") << "{bad";
    CHECK(run("solve -c bad.json") == 2);
    CHECK(run("solve -c missing.json") == 2);
    CHECK(run("solve --bath.lambda=0.5 --outputs.directory=x") == 2);
    CHECK(run("thermal --bath.alpha=0.3 --outputs.directory=x") == 3);
    CHECK(run("thermal --thermal.delta_list=[] --outputs.directory=x") == 2);
    CHECK(run("wigner " + kSmall + "--wigner.modes=[40] --outputs.directory=x") == 2);
    CHECK(run("ed-check --ed.fock_cutoff=200 --outputs.directory=x") == 2);
    CHECK(run("nonsense") == 2);
    CHECK(run("solve " + kSmall + "--solver.N_max=2 --solver.max_iters=2 --outputs.directory=cap") == 4);
}

TEST_CASE("wigner files carry the requested channels")
{
    fs::remove_all(kWork / "wg");
    REQUIRE(run("wigner " + kSmall + "--wigner.modes=[3] --wigner.N=[1,2] --wigner.points=21 "
                                     "--wigner.moment_order=14 --outputs.directory=wg") == 0);
    const auto files = snapshot(kWork / "wg");
    CHECK(files.count("wigner_k3_diagonal_N1.csv") == 1);
    CHECK(files.count("wigner_k3_off_diagonal_N2.csv") == 1);
    const auto r = rows(kWork / "wg" / "wigner_k3_diagonal_N1.csv");
    REQUIRE(r.size() == 21);
    REQUIRE(r[0].size() == 3);
    for (const auto& row : r) CHECK(std::stod(row[2]) == doctest::Approx(2 * std::stod(row[1])).epsilon(1e-6).scale(1e-6));
}

TEST_CASE("thermal sweep")
{
    fs::remove_all(kWork / "th");
    REQUIRE(run("thermal --bath.lambda=1.5 --thermal.delta_list=[0.01] --thermal.points=11 --outputs.directory=th") == 0);
    const auto r = rows(kWork / "th" / "thermal.csv");
    REQUIRE(r.size() == 11);
    for (std::size_t i = 1; i < r.size(); ++i) {
        CHECK(std::stod(r[i][0]) > std::stod(r[i - 1][0]));
        CHECK(std::stod(r[i][1]) < std::stod(r[i - 1][1]));
        CHECK(std::stod(r[i][2]) <= std::stod(r[i - 1][2]));
    }
}

TEST_CASE("ed-check at zero tunneling")
{
    fs::remove_all(kWork / "ed0");
    REQUIRE(run("ed-check --model.delta=0 --ed.fock_cutoff=16 --ed.N_max=2 --outputs.directory=ed0") == 0);
    const auto r = rows(kWork / "ed0" / "ed_check.csv");
    REQUIRE(r.size() == 2);
    // the single polaron is exact at Delta = 0
    CHECK(std::stod(r[0][1]) == doctest::Approx(std::stod(r[0][2])).epsilon(1e-9));
}

TEST_CASE("discretize writes the mode table")
{
    fs::remove_all(kWork / "bath");
    REQUIRE(run("discretize --bath.lambda=2 --bath.num_modes=5 --outputs.directory=bath") == 0);
    CHECK(rows(kWork / "bath" / "bath.csv").size() == 5);
    CHECK(slurp(kWork / "bath" / "bath.json").find("\"modes\"") != std::string::npos);
}
