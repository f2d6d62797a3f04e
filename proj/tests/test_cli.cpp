#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string command = std::string(GEPSVM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
    const int status = pclose(pipe);
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = output;
    return r;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "gepsvm_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("synth then train writes a model and reports accuracy") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "blobs.csv";
    const fs::path model = dir / "blobs.model";

    auto synth = run_cli("synth --kind blobs --n 20 --distance 10 --noise 1 --seed 4 --out " +
                         csv.string());
    CHECK(synth.exit_code == 0);
    REQUIRE(fs::exists(csv));

    auto train = run_cli("train --data " + csv.string() + " --mode linear --delta 0.5 --out " +
                         model.string());
    CHECK(train.exit_code == 0);
    CHECK(fs::exists(model));
    CHECK(train.output.find("accuracy") != std::string::npos);
    CHECK(slurp(model).rfind("gepsvm-model v1 linear", 0) == 0);
}

TEST_CASE("missing input file exits 1") {
    auto r = run_cli("train --data /nonexistent/missing.csv --mode linear");
    CHECK(r.exit_code == 1);
}

TEST_CASE("train then predict on the training set reproduces the printed accuracy") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "xor.csv";
    const fs::path model = dir / "xor.model";
    const fs::path preds = dir / "xor.preds";

    REQUIRE(run_cli("synth --kind xor --n 20 --noise 0.2 --seed 8 --out " + csv.string())
                .exit_code == 0);
    auto train = run_cli("train --data " + csv.string() +
                         " --mode nonlinear --kernel rbf --sigma 1 --delta 0.01 --out " +
                         model.string());
    REQUIRE(train.exit_code == 0);
    auto predict = run_cli("predict --model " + model.string() + " --data " + csv.string() +
                           " --out " + preds.string());
    REQUIRE(predict.exit_code == 0);

    auto accuracy_line = [](const std::string& text) {
        const auto at = text.find("accuracy ");
        REQUIRE(at != std::string::npos);
        return text.substr(at);
    };
    CHECK(accuracy_line(train.output) == accuracy_line(predict.output));
}

TEST_CASE("model and data dimensions must agree at predict time") {
    const fs::path dir = work_dir();
    const fs::path csv2 = dir / "two.csv";
    const fs::path csv3 = dir / "three.csv";
    const fs::path model = dir / "two.model";
    {
        std::ofstream os(csv2);
        os << "0,0,1\n0.1,0,1\n1,1,2\n1.1,1,2\n";
    }
    {
        std::ofstream os(csv3);
        os << "0,0,0,1\n0.1,0,0,1\n1,1,1,2\n1.1,1,1,2\n";
    }
    REQUIRE(run_cli("train --data " + csv2.string() + " --mode linear --delta 1 --out " +
                    model.string())
                .exit_code == 0);
    auto r = run_cli("predict --model " + model.string() + " --data " + csv3.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("saved models give identical predictions after reload") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "round.csv";
    const fs::path model = dir / "round.model";
    const fs::path p1 = dir / "round1.preds";
    const fs::path p2 = dir / "round2.preds";

    REQUIRE(run_cli("synth --kind cross --n 25 --noise 0.1 --seed 14 --out " + csv.string())
                .exit_code == 0);
    REQUIRE(run_cli("train --data " + csv.string() +
                    " --mode nonlinear --kernel polyrbf --sigma 2 --degree 3 --delta 0.1 --out " +
                    model.string())
                .exit_code == 0);
    REQUIRE(run_cli("predict --model " + model.string() + " --data " + csv.string() + " --out " +
                    p1.string())
                .exit_code == 0);
    REQUIRE(run_cli("predict --model " + model.string() + " --data " + csv.string() + " --out " +
                    p2.string())
                .exit_code == 0);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(!slurp(p1).empty());
}

TEST_CASE("unlabeled input writes predictions without an accuracy line") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "lab.csv";
    const fs::path unlabeled = dir / "nolab.csv";
    const fs::path model = dir / "lab.model";
    const fs::path preds = dir / "nolab.preds";
    {
        std::ofstream os(csv);
        os << "0,0,1\n0.2,0,1\n5,5,2\n5.2,5,2\n";
    }
    {
        std::ofstream os(unlabeled);
        os << "0.1,0\n5.1,5\n";
    }
    REQUIRE(run_cli("train --data " + csv.string() + " --mode linear --delta 1 --out " +
                    model.string())
                .exit_code == 0);
    auto r = run_cli("predict --model " + model.string() + " --data " + unlabeled.string() +
                     " --no-labels --out " + preds.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("accuracy") == std::string::npos);
    CHECK(slurp(preds) == "1\n2\n");
}

TEST_CASE("tune runs are deterministic under a fixed seed") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "tuneme.csv";
    const fs::path out1 = dir / "tune1.tsv";
    const fs::path out2 = dir / "tune2.tsv";
    REQUIRE(run_cli("synth --kind blobs --n 15 --distance 8 --noise 1 --seed 2 --out " +
                    csv.string())
                .exit_code == 0);
    const std::string base = "tune --data " + csv.string() +
                             " --mode linear --seed 7 --popsize 8 --maxcycle 4 --k 5 --out ";
    REQUIRE(run_cli(base + out1.string()).exit_code == 0);
    REQUIRE(run_cli(base + out2.string()).exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(fs::exists(dir / "tune1.history.tsv"));
    CHECK(slurp(dir / "tune1.history.tsv").rfind("cycle\tbest_fitness", 0) == 0);
}

TEST_CASE("bench emits one row per dataset and kernel plus plot data") {
    const fs::path dir = work_dir();
    const fs::path csv1 = dir / "bench_a.csv";
    const fs::path csv2 = dir / "bench_b.csv";
    const fs::path out = dir / "bench.tsv";
    REQUIRE(run_cli("synth --kind blobs --n 10 --distance 9 --noise 1 --seed 3 --out " +
                    csv1.string())
                .exit_code == 0);
    REQUIRE(run_cli("synth --kind xor --n 10 --noise 0.2 --seed 5 --out " + csv2.string())
                .exit_code == 0);
    auto r = run_cli("bench --data " + csv1.string() + " --data " + csv2.string() +
                     " --mode nonlinear --kernels poly,rbf,polyrbf --k 5 --seed 1 --popsize 4 "
                     "--maxcycle 1 --out " +
                     out.string());
    REQUIRE(r.exit_code == 0);
    const std::string table = slurp(out);
    CHECK(std::count(table.begin(), table.end(), '\n') == 7);  // header + 6 rows
    CHECK(fs::exists(dir / "bench.plot.tsv"));
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "cfg.csv";
    const fs::path cfg = dir / "run.cfg";
    const fs::path model = dir / "cfg.model";
    REQUIRE(run_cli("synth --kind blobs --n 10 --distance 9 --noise 1 --seed 6 --out " +
                    csv.string())
                .exit_code == 0);
    {
        std::ofstream os(cfg);
        os << "# run configuration\n";
        os << "data=" << csv.string() << "\n";
        os << "mode=linear\n";
        os << "delta=123.0\n";
    }
    auto r = run_cli("train --config " + cfg.string() + " --delta 0.25 --out " + model.string());
    REQUIRE(r.exit_code == 0);
    CHECK(slurp(model).find("delta 0.25") != std::string::npos);
}

TEST_CASE("cv writes a result row and the fold plan") {
    const fs::path dir = work_dir();
    const fs::path csv = dir / "cvout.csv";
    const fs::path out = dir / "cv.tsv";
    REQUIRE(run_cli("synth --kind blobs --n 12 --distance 9 --noise 1 --seed 9 --out " +
                    csv.string())
                .exit_code == 0);
    REQUIRE(run_cli("cv --data " + csv.string() + " --mode linear --delta 1 --k 4 --seed 2 --out " +
                    out.string())
                .exit_code == 0);
    CHECK(slurp(out).rfind("dataset\tmode", 0) == 0);
    const std::string folds = slurp(dir / "cv.folds.tsv");
    CHECK(folds.rfind("sample_index\tfold", 0) == 0);
    CHECK(std::count(folds.begin(), folds.end(), '\n') == 25);  // header + 24 samples
}

TEST_CASE("invalid configuration exits 1") {
    CHECK(run_cli("tune --data nothing.csv --maxcycle 0").exit_code == 1);
    CHECK(run_cli("cv --data nothing.csv --k 1").exit_code == 1);
    CHECK(run_cli("nonsense-command").exit_code == 1);
}
