// =============================================================================
// Integration tests: the quadineq command-line tool
// =============================================================================
// Drives the installed binary through std::system and checks exit codes,
// report contents and byte-level determinism.  The binary path arrives as
// the first program argument (wired up by CMake); remaining arguments go to
// doctest.
// =============================================================================

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_cli;          // path to the binary under test
fs::path g_dir;             // scratch directory for inputs and reports

int run(const std::string& args) {
    std::string cmd = "\"" + g_cli + "\" " + args;
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    REQUIRE(out.good());
    out << text;
}

json slurp_json(const fs::path& p) { return json::parse(slurp(p)); }

// data rows = lines that are neither comments nor the header
long long csv_data_rows(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long long rows = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        ++rows;
    }
    return rows;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

// =============================================================================
// usage and help
// =============================================================================

TEST_CASE("help and usage errors") {
    fs::path null = g_dir / "null.txt";
    CHECK(run("--help > \"" + null.string() + "\" 2>&1") == 0);
    CHECK(run("verify --help > \"" + null.string() + "\" 2>&1") == 0);
    CHECK(run("> \"" + null.string() + "\" 2>&1") == 2);
    CHECK(run("frobnicate > \"" + null.string() + "\" 2>&1") == 2);
    CHECK(run("verify --no-such-flag > \"" + null.string() + "\" 2>&1") == 2);
}

// =============================================================================
// verify
// =============================================================================

TEST_CASE("verify on the generated corpus") {
    fs::path out = g_dir / "verify.csv";
    REQUIRE(run("verify --check quadtran --n 500 --output \"" + out.string() +
                "\"") == 0);
    std::string text = slurp(out);
    CHECK(contains(text, "# command:"));
    CHECK(contains(text, "yq,yp,zq,zp,qp,yz,lhs,rhs,margin,holds"));
    CHECK(contains(text, "violations: 0"));
    CHECK(csv_data_rows(text) == 500);

    SUBCASE("every check name is wired") {
        for (const char* check :
             {"quad2", "symmetric", "ptolemy", "roundness"}) {
            fs::path f = g_dir / (std::string("verify_") + check + ".csv");
            CHECK(run(std::string("verify --check ") + check +
                      " --n 50 --output \"" + f.string() + "\"") == 0);
        }
    }
}

TEST_CASE("verify reads configuration files and flags violations") {
    fs::path good = g_dir / "good.csv";
    spit(good,
         "yq,yp,zq,zp,qp,yz\n"
         "3,2,2,1,1,1\n"
         "1,1,1,1,1,1\n");
    fs::path rep = g_dir / "file_verify.csv";
    CHECK(run("verify --check quad2 --input \"" + good.string() +
              "\" --output \"" + rep.string() + "\"") == 0);
    CHECK(csv_data_rows(slurp(rep)) == 2);

    fs::path bad = g_dir / "bad.csv";
    spit(bad,
         "yq,yp,zq,zp,qp,yz\n"
         "3,2,2,1,1,1\n"
         "2,1,1,2,1,1\n");
    CHECK(run("verify --check quad2 --input \"" + bad.string() +
              "\" --output \"" + rep.string() + "\"") == 1);
    CHECK(contains(slurp(rep), "violations: 1"));
    CHECK(run("verify --check quadtran --input \"" + bad.string() +
              "\" --output \"" + rep.string() + "\"") == 1);
}

TEST_CASE("malformed input files are usage errors") {
    fs::path rep = g_dir / "junk_report.csv";

    fs::path narrow = g_dir / "narrow.csv";
    spit(narrow, "1,2,3\n");
    CHECK(run("verify --check quad2 --input \"" + narrow.string() +
              "\" --output \"" + rep.string() + "\" 2> /dev/null") == 2);

    fs::path textbad = g_dir / "text.csv";
    spit(textbad, "yq,yp,zq,zp,qp,yz\n1,1,1,1,1,1\nfoo,1,1,1,1,1\n");
    CHECK(run("verify --check quad2 --input \"" + textbad.string() +
              "\" --output \"" + rep.string() + "\" 2> /dev/null") == 2);

    CHECK(run("verify --check quad2 --input \"" +
              (g_dir / "missing.csv").string() + "\" --output \"" +
              rep.string() + "\" 2> /dev/null") == 2);
}

// =============================================================================
// constants
// =============================================================================

TEST_CASE("constants search emits a full JSON report") {
    fs::path out = g_dir / "constants.json";
    REQUIRE(run("constants --kind L --normalization power --alpha 2"
                " --resolution 5 --refine 50 --format json --output \"" +
                out.string() + "\"") == 0);
    json j = slurp_json(out);
    CHECK(j["kind"] == "L");
    CHECK(j["normalization"] == "power");
    CHECK(j["grid"]["resolution"] == 5);
    CHECK(j["raw_cells"] == 15625);  // 5^6
    double best = j["best_ratio"].get<double>();
    CHECK(best > 1.9);
    CHECK(best <= 2.0 * (1.0 + 1e-9));
    CHECK(j["manifest"]["seed"] == 42);
    CHECK(j["manifest"]["timestamp"] == "unset");
    CHECK_FALSE(j["top_params"].empty());
}

// =============================================================================
// witnesses
// =============================================================================

TEST_CASE("witnesses report") {
    fs::path out = g_dir / "witness.json";
    REQUIRE(run("witnesses --format json --output \"" + out.string() + "\"") ==
            0);
    json j = slurp_json(out);
    CHECK(j["families"].size() >= 7);
    for (const auto& fam : j["families"]) {
        CHECK(fam["metric_ok"] == true);
        CHECK(fam["quad2_holds"] == true);
    }
    bool saw_unit = false;
    for (const auto& lb : j["lower_bounds"]) {
        if (lb["name"] == "unit") {
            saw_unit = true;
            CHECK(lb["value"] == 1.0);
        }
        if (lb["name"] == "witness_i")
            CHECK(lb["value"].get<double>() == doctest::Approx(1.0));
    }
    CHECK(saw_unit);
}

// =============================================================================
// lemmas
// =============================================================================

TEST_CASE("lemma runs") {
    fs::path out = g_dir / "lemma.csv";
    REQUIRE(run("lemmas --id main_param --n 300 --output \"" + out.string() +
                "\"") == 0);
    std::string text = slurp(out);
    CHECK(contains(text, "main_param"));
    CHECK(contains(text, "failures: 0"));

    fs::path null = g_dir / "null.txt";
    CHECK(run("lemmas --id no_such_lemma > \"" + null.string() +
              "\" 2>&1") == 2);
    CHECK(run("lemmas --all --id main_param > \"" + null.string() +
              "\" 2>&1") == 2);
    CHECK(run("lemmas > \"" + null.string() + "\" 2>&1") == 2);
    // third-derivative lemma explicitly requested on a first-order transform
    CHECK(run("lemmas --id ddr --transform huber > \"" + null.string() +
              "\" 2>&1") == 2);
}

// =============================================================================
// mollify
// =============================================================================

TEST_CASE("mollify report") {
    fs::path out = g_dir / "mollify.json";
    REQUIRE(run("mollify --transform power --alpha 1.5 --n 1"
                " --points 17 --format json --output \"" +
                out.string() + "\"") == 0);
    json j = slurp_json(out);
    CHECK(j["membership"]["nondecreasing_ok"] == true);
    CHECK(j["membership"]["convex_ok"] == true);
    CHECK(j["membership"]["concave_deriv_ok"] == true);
    CHECK(j["membership"]["zero_at_zero_ok"] == true);
    double scaling = j["scaling"].get<double>();
    CHECK(scaling > std::exp(-1.0));
    CHECK(scaling < std::exp(1.0));
    CHECK(j["grid"].size() == 17);
}

// =============================================================================
// frechet
// =============================================================================

TEST_CASE("frechet mean from a CSV cloud") {
    fs::path pts = g_dir / "pts.csv";
    spit(pts, "0,0\n1,0\n0,1\n4,4\n");
    fs::path out = g_dir / "frechet.json";
    REQUIRE(run("frechet --input \"" + pts.string() + "\" --format json"
                " --output \"" + out.string() + "\"") == 0);
    json j = slurp_json(out);
    CHECK(j["converged"] == true);
    CHECK(j["n"] == 4);
    CHECK(j["dim"] == 2);
    // default transform is tau_2, so the minimizer is the coordinate mean
    CHECK(j["minimizer"][0].get<double>() == doctest::Approx(1.25).epsilon(1e-6));
    CHECK(j["minimizer"][1].get<double>() == doctest::Approx(1.25).epsilon(1e-6));

    SUBCASE("huber run on the same cloud") {
        fs::path out2 = g_dir / "frechet_huber.json";
        REQUIRE(run("frechet --input \"" + pts.string() +
                    "\" --transform huber --delta 1 --format json --output \"" +
                    out2.string() + "\"") == 0);
        CHECK(slurp_json(out2)["converged"] == true);
    }
}

// =============================================================================
// rate
// =============================================================================

TEST_CASE("rate experiment smoke run") {
    fs::path out = g_dir / "rate.csv";
    REQUIRE(run("rate --n-list 50 100 --reps 8 --output \"" + out.string() +
                "\"") == 0);
    std::string text = slurp(out);
    CHECK(contains(text, "n,mean_error,sd"));
    CHECK(contains(text, "# slope:"));
    CHECK(contains(text, "failures: 0"));
    CHECK(csv_data_rows(text) == 2);
}

// =============================================================================
// transform specs
// =============================================================================

TEST_CASE("transform specification forms") {
    fs::path null = g_dir / "null.txt";
    CHECK(run("verify --check quadtran --transform pseudo_huber --delta 2"
              " --n 50 > \"" + null.string() + "\"") == 0);
    CHECK(run("verify --check quadtran --transform \"power(1.25)\" --n 50 > \"" +
              null.string() + "\"") == 0);

    fs::path spec = g_dir / "spec.txt";
    spit(spec, "huber(0.5)\n");
    CHECK(run("verify --check quadtran --transform @\"" + spec.string() +
              "\" --n 50 > \"" + null.string() + "\"") == 0);

    CHECK(run("verify --check quadtran --transform \"power(0)\" --n 10 > \"" +
              null.string() + "\" 2>&1") == 2);
}

// =============================================================================
// determinism
// =============================================================================

TEST_CASE("reports are byte-identical across reruns and thread counts") {
    fs::path a = g_dir / "det_a.txt", b = g_dir / "det_b.txt",
             c = g_dir / "det_c.txt", d = g_dir / "det_d.txt";

    std::string cmd = "verify --check quadtran --n 300";
    REQUIRE(run(cmd + " > \"" + a.string() + "\"") == 0);
    REQUIRE(run(cmd + " > \"" + b.string() + "\"") == 0);
    CHECK(slurp(a) == slurp(b));

    // a different seed must actually change the body
    REQUIRE(run(cmd + " --seed 7 > \"" + c.string() + "\"") == 0);
    CHECK(slurp(a) != slurp(c));

    // --threads is elided from the recorded command line, so reports agree
    std::string search = "constants --kind L --normalization power --alpha 1.5"
                         " --resolution 5 --refine 20 --format json";
    REQUIRE(run(search + " --threads 1 > \"" + a.string() + "\"") == 0);
    REQUIRE(run(search + " --threads 4 > \"" + b.string() + "\"") == 0);
    REQUIRE(run(search + " > \"" + d.string() + "\"") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(d));
}

// =============================================================================

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-quadineq-cli> [doctest args]\n",
                     argv[0]);
        return 64;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "quadineq_cli_tests";
    fs::create_directories(g_dir);

    std::vector<char*> args;
    args.push_back(argv[0]);
    for (int i = 2; i < argc; ++i) args.push_back(argv[i]);

    doctest::Context ctx(static_cast<int>(args.size()), args.data());
    return ctx.run();
}
