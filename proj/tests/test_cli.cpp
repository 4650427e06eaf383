#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nildyn/bundled.hpp"
#include "golden_commands.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path work_dir() {
    const fs::path d = fs::temp_directory_path() / "nildyn_cli_tests";
    fs::create_directories(d);
    return d;
}

RunResult run_cli(const std::string& args) {
    const fs::path dir = work_dir();
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(NILDYN_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string params_file(const std::string& name) {
    return std::string(NILDYN_PARAMS_DIR) + "/" + name + ".json";
}

std::string expand(std::string text) {
    const std::string key = "{P}";
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key))
        text.replace(pos, key.size(), NILDYN_PARAMS_DIR);
    return text;
}

} // namespace

TEST_CASE("bundled params files match the in-library definitions") {
    for (const auto& [name, doc] : nildyn::bundled_examples()) {
        const std::string path = params_file(name);
        REQUIRE(fs::exists(path));
        std::ifstream in(path);
        nlohmann::json on_disk;
        in >> on_disk;
        CHECK(nlohmann::json(nildyn::to_json(doc)) == on_disk);
        // and it round-trips through the parser into valid FieldParams
        const auto lp = nildyn::load_params_file(path);
        CHECK(nildyn::to_json(nildyn::from_field_params(
                  lp.params, lp.document.label))["P1"] == on_disk["P1"]);
    }
}

TEST_CASE("every golden command is byte-identical across two runs") {
    const fs::path dir = work_dir();
    for (const auto& gc : nd_test::golden_commands()) {
        INFO(gc.name);
        std::string args = expand(gc.args);
        fs::path csv1, csv2;
        if (!gc.csv.empty()) {
            csv1 = dir / ("run1_" + gc.csv);
            csv2 = dir / ("run2_" + gc.csv);
        }
        const RunResult r1 = run_cli(args + (gc.csv.empty() ? "" : " --out " + csv1.string()));
        const RunResult r2 = run_cli(args + (gc.csv.empty() ? "" : " --out " + csv2.string()));
        REQUIRE(r1.exit_code == 0);
        REQUIRE(r2.exit_code == 0);
        CHECK(r1.out == r2.out);
        CHECK_FALSE(r1.out.empty());
        if (!gc.csv.empty()) {
            const std::string b1 = slurp(csv1), b2 = slurp(csv2);
            CHECK(b1 == b2);
            CHECK_FALSE(b1.empty());
        }
    }
}

TEST_CASE("schema errors name the offending field path and exit 1") {
    const fs::path dir = work_dir();
    const fs::path bad = dir / "bad_params.json";
    {
        std::ofstream out(bad);
        out << R"({"P1": ["1", "oops"], "P2": ["0", "1"]})";
    }
    const RunResult r = run_cli("nilcheck " + bad.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("P1[1]") != std::string::npos);

    const fs::path bad2 = dir / "bad_constraint.json";
    {
        std::ofstream out(bad2);
        out << R"({"P1": ["0","1"], "P2": ["0","0","1"], "A1": {"a12": "1"}})";
    }
    const RunResult r2 = run_cli("nilcheck " + bad2.string());
    CHECK(r2.exit_code == 1);
    CHECK(r2.err.find("a12") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("nilcheck --no-such-flag x.json").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("nilcheck").exit_code == 1); // params file required
    CHECK(run_cli("simulate " + params_file("mu_negative") + " --start 0,0,0 --tspan 1,2")
              .exit_code == 1);
    CHECK(run_cli("poincare").exit_code == 1); // neither --find-cstar nor --orbit
}

TEST_CASE("injected faults trip the consistency detectors with exit 2") {
    const RunResult r1 =
        run_cli("nilcheck " + params_file("linear_p1") + " --inject-fault nilpotency-mismatch");
    CHECK(r1.exit_code == 2);
    CHECK(r1.err.find("consistency") != std::string::npos);

    const RunResult r2 = run_cli("cycles " + params_file("linear_p1") +
                                 " --length 2 --starts 40 --inject-fault two-cycle-ghost");
    CHECK(r2.exit_code == 2);
}

TEST_CASE("cycles report carries the exact multiplier and classification") {
    const RunResult r = run_cli("cycles " + params_file("linear_p1") + " --length 3 --exact");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["results"]["cycles"].size() == 1);
    const auto& c = j["results"]["cycles"][0];
    CHECK(c["L22"]["exact"] == "4");
    CHECK(c["classification"] == "saddle");
    CHECK(c["product_structure_ok"] == true);
    CHECK(c["points_simplified"][0]["exact"][1] == "1");
}

TEST_CASE("poincare report places z* inside the expected bracket") {
    const RunResult r = run_cli("poincare --find-cstar --tol 1e-4");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double zstar = j["results"]["z_star"].get<double>();
    CHECK(zstar > 1.6305);
    CHECK(zstar < 1.6310);
    for (const auto& v : j["verdicts"]) CHECK(v["pass"] == true);
}

TEST_CASE("exact iterate CSV carries rational cells") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "exact_orbit.csv";
    const RunResult r = run_cli("iterate " + params_file("linear_p1") +
                                " --start 1/2,1/3,-2 --steps 4 --exact --out " + csv.string());
    REQUIRE(r.exit_code == 0);
    const std::string body = slurp(csv);
    CHECK(body.rfind("k,x,y,z,X,Y,Z", 0) == 0);
    CHECK(body.find("1/2,1/3,-2") != std::string::npos);
    CHECK(body.find('.') == std::string::npos); // no floats anywhere in exact mode
}

TEST_CASE("simulate CSV monitors every known first integral") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "sim.csv";
    const RunResult r = run_cli("simulate " + params_file("big_degree") +
                                " --start 0.1,0.2,0.3 --tspan -1,1 --tol 1e-10 --out " + csv.string());
    REQUIRE(r.exit_code == 0);
    const std::string body = slurp(csv);
    CHECK(body.rfind("t,x,y,z,H,H1,H2", 0) == 0); // a12 = 0: complete set present
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"]["relative_drift"].contains("H2"));
}

TEST_CASE("phase-data emits a nonempty level sample table") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "level.csv";
    const RunResult r = run_cli("phase-data " + params_file("two_annuli") +
                                " --level 1 --grid 60 --out " + csv.string());
    REQUIRE(r.exit_code == 0);
    const std::string body = slurp(csv);
    int lines = 0;
    for (char ch : body)
        if (ch == '\n') ++lines;
    CHECK(lines > 10);
}
