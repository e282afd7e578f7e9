#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "riq/image.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = RIQ_BIN;
const std::string kWork = "/tmp/riq_cli_test";

int run(const std::string& args, std::string* stdout_text = nullptr) {
    const std::string out_file = kWork + "/stdout.txt";
    const int ret = std::system((kBin + " " + args + " >" + out_file + " 2>" + kWork + "/stderr.txt").c_str());
    if (stdout_text) {
        std::ifstream in(out_file, std::ios::binary);
        stdout_text->assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }
    return WIFEXITED(ret) ? WEXITSTATUS(ret) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

struct Setup {
    Setup() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
        riq::save_ppm(riq::RasterImage::constant(64, 64, 0.1, 0.4, 0.9), kWork + "/constant.ppm");
    }
};
const Setup setup_once;

// shared across the ordered cases below
const std::string kDataset = kWork + "/ds";
const std::string kModel = kWork + "/model.txt";
const std::string kIndexFile = kWork + "/index.txt";
const std::string kFastFlags = " --target-size 64 --seed 1 ";

}  // namespace

TEST_CASE("usage: help exits 0, bad invocations exit 1") {
    CHECK(run("--help") == 0);
    CHECK(run("segment --help") == 0);
    CHECK(run("") == 1);                        // a subcommand is required
    CHECK(run("frobnicate") == 1);              // unknown subcommand
    CHECK(run("segment") == 1);                 // missing positional
    CHECK(run("segment x.ppm --bogus-flag") == 1);
}

TEST_CASE("segment: constant image is one full-frame region") {
    std::string out;
    CHECK(run("segment " + kWork + "/constant.ppm" + kFastFlags, &out) == 0);
    CHECK(out == "0\t0\t4096\t0,0,63,63\n");
}

TEST_CASE("segment: label map written as PGM") {
    const std::string pgm = kWork + "/labels.pgm";
    CHECK(run("segment " + kWork + "/constant.ppm --labels-out " + pgm + kFastFlags) == 0);
    const std::string bytes = slurp(pgm);
    CHECK(bytes.rfind("P5\n64 64\n255\n", 0) == 0);
    CHECK(bytes.size() == std::string("P5\n64 64\n255\n").size() + 64 * 64);
}

TEST_CASE("segment: runtime data errors exit 2") {
    CHECK(run("segment " + kWork + "/no_such_image.ppm") == 2);
    std::ofstream(kWork + "/garbage.ppm") << "not actually a ppm";
    CHECK(run("segment " + kWork + "/garbage.ppm") == 2);
}

TEST_CASE("synth: writes dataset and manifests") {
    CHECK(run("synth " + kDataset + " --train-count 10 --test-count 5 --size 64 --seed 3") == 0);
    CHECK(fs::exists(kDataset + "/train.manifest"));
    CHECK(fs::exists(kDataset + "/test.manifest"));
    CHECK(fs::exists(kDataset + "/images/sky_train_0.ppm"));
}

TEST_CASE("train: same seed twice gives byte-identical models") {
    const std::string args =
        "train " + kDataset + "/train.manifest --epochs 300" + kFastFlags + "-o ";
    CHECK(run(args + kModel) == 0);
    CHECK(run(args + kWork + "/model_again.txt") == 0);
    const std::string m1 = slurp(kModel);
    CHECK(m1 == slurp(kWork + "/model_again.txt"));
    CHECK(m1.rfind("RIQMLNN 1\n", 0) == 0);

    // a different seed produces a different model
    CHECK(run("train " + kDataset + "/train.manifest --epochs 300 --target-size 64 --seed 2 -o " + kWork +
              "/model_seed2.txt") == 0);
    CHECK(m1 != slurp(kWork + "/model_seed2.txt"));
}

TEST_CASE("classify: tab-separated region predictions") {
    std::string out;
    CHECK(run("classify " + kDataset + "/images/sky_train_0.ppm " + kModel + kFastFlags, &out) == 0);
    CHECK(!out.empty());
    // first line: index, category name, numeric output
    CHECK(out.rfind("0\t", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\t') >= 2);
}

TEST_CASE("classify: corrupt model exits 2") {
    std::ofstream(kWork + "/broken_model.txt") << "RIQMLNN 1\nlayers 201 32 1\n";
    CHECK(run("classify " + kWork + "/constant.ppm " + kWork + "/broken_model.txt" + kFastFlags) == 2);
}

TEST_CASE("evaluate: runs over a manifest and prints a summary") {
    std::string out;
    CHECK(run("evaluate " + kDataset + "/test.manifest " + kModel + kFastFlags, &out) == 0);
    CHECK(out.find("average") != std::string::npos);
    CHECK(out.find("accuracy") != std::string::npos);
    CHECK(out.find("confusion") != std::string::npos);
}

TEST_CASE("index and query: end to end") {
    // a decodable directory plus one corrupt file that must be skipped
    std::ofstream(kDataset + "/images/broken.ppm") << "P6 garbage";
    std::string out;
    CHECK(run("index " + kDataset + "/images " + kModel + kFastFlags + "-o " + kIndexFile, &out) == 0);
    CHECK(out.find("(1 failed)") != std::string::npos);
    const std::string idx = slurp(kIndexFile);
    CHECK(idx.rfind("RIQIDX 1\nfingerprint ", 0) == 0);

    // deterministic: rebuilding the index gives identical bytes
    CHECK(run("index " + kDataset + "/images " + kModel + kFastFlags + "-o " + kWork + "/index2.txt") == 0);
    CHECK(idx == slurp(kWork + "/index2.txt"));

    // queries: every returned id must exist in the index text
    CHECK(run("query " + kIndexFile + " Sky", &out) == 0);
    CHECK(run("query " + kIndexFile + " Sky Water --or", &out) == 0);
    for (std::size_t pos = 0, eol; pos < out.size(); pos = eol + 1) {
        eol = out.find('\n', pos);
        if (eol == std::string::npos) break;
        CHECK(idx.find(out.substr(pos, eol - pos) + "\t") != std::string::npos);
    }

    // matching model passes the fingerprint check quietly
    CHECK(run("query " + kIndexFile + " Sky --model " + kModel + kFastFlags) == 0);

    CHECK(run("query " + kIndexFile + " NotACategory") == 2);
    CHECK(run("query " + kWork + "/missing_index.txt Sky") == 2);
}

TEST_CASE("index: empty directory produces a valid empty index") {
    fs::create_directories(kWork + "/empty_dir");
    CHECK(run("index " + kWork + "/empty_dir " + kModel + kFastFlags + "-o " + kWork + "/empty_index.txt") == 0);
    std::string out;
    CHECK(run("query " + kWork + "/empty_index.txt Sky", &out) == 0);
    CHECK(out.empty());
}

TEST_CASE("train: missing manifest exits 2") {
    CHECK(run("train " + kWork + "/nope.manifest -o " + kWork + "/nope_model.txt") == 2);
}
