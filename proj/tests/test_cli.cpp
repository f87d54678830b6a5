#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "lipasp/asplund.hpp"
#include "lipasp/cli.hpp"
#include "lipasp/image_io.hpp"
#include "lipasp/lip_core.hpp"
#include "lipasp/morphology.hpp"
#include "test_support.hpp"

using namespace lipasp;
using namespace lipasp::cli;
using lipasp::testing::Rng;
namespace fs = std::filesystem;

namespace {

const LipScale k8bit(256.0);

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("lipasp_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void save(const std::string& path, const GreyImage& img, PgmVariant v = PgmVariant::P5) {
  write_file(path, write_pgm(img, v));
}

GreyImage row_image(std::vector<double> v, double m = 256.0) {
  const int n = static_cast<int>(v.size());
  return GreyImage(n, 1, LipScale(m), std::move(v));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json single_json_line(const std::string& text) {
  REQUIRE(!text.empty());
  REQUIRE(text.back() == '\n');
  REQUIRE(text.find('\n') == text.size() - 1);
  return nlohmann::json::parse(text);
}

int run_args(std::vector<const char*> args, std::ostream& out, std::ostream& err) {
  args.insert(args.begin(), "lipasp");
  return run(static_cast<int>(args.size()), args.data(), out, err);
}

}  // namespace

TEST_CASE("asplund on the 1-D sample writes the expected map and metadata") {
  TempDir dir;
  save(dir / "f.pgm", row_image({100, 150, 200}), PgmVariant::P2);
  save(dir / "b.pgm", row_image({100, 150}), PgmVariant::P2);
  AsplundOptions opt;
  opt.image = dir / "f.pgm";
  opt.probe = dir / "b.pgm";
  opt.out = dir / "map.aspf";
  std::ostringstream out, err;
  REQUIRE(cmd_asplund(opt, out, err) == kExitOk);

  const DistanceMap map = read_map(read_file(opt.out));
  REQUIRE(map.values.size() == 2);
  CHECK(map.values[0] == 0.0);
  CHECK(std::abs(map.values[1] - 0.032232822631185186) <= 1e-12);

  const auto meta = single_json_line(out.str());
  CHECK(meta["command"] == "asplund");
  CHECK(meta["method"] == "both");
  CHECK(meta["image_path"] == opt.image);
  CHECK(meta["probe_path"] == opt.probe);
  CHECK(meta["M"] == 256.0);
  CHECK(meta["clamped_pixels"] == 0);
  CHECK(meta["max_equiv_discrepancy"].get<double>() <= 1e-9);
  CHECK(meta["wall_time_ms"].get<double>() >= 0.0);
  CHECK(err.str().empty());
}

TEST_CASE("asplund output is bit-identical to the in-process result") {
  TempDir dir;
  Rng rng(31);
  for (const char* method : {"direct", "gradient", "both"}) {
    const GreyImage f = lipasp::testing::random_grey_image(rng, 23, 17);
    GreyImage b = lipasp::testing::random_grey_image(rng, 4, 3);
    save(dir / "f.pgm", f);
    save(dir / "b.pgm", b);
    AsplundOptions opt;
    opt.image = dir / "f.pgm";
    opt.probe = dir / "b.pgm";
    opt.out = dir / "map.aspf";
    opt.method = method;
    std::ostringstream out, err;
    REQUIRE(cmd_asplund(opt, out, err) == kExitOk);

    AsplundRequest req;
    req.image = f;
    req.probe = probe_from_pgm(b);
    const DistanceMap expected = std::string(method) == "direct" ? asplund_direct(req)
                                                                 : asplund_gradient(req);
    const DistanceMap got = read_map(read_file(opt.out));
    CHECK(got.origin == expected.origin);
    CHECK(got.method == expected.method);
    CHECK(lipasp::testing::bit_identical(got.values, expected.values));
    const auto meta = single_json_line(out.str());
    if (std::string(method) == "both") {
      CHECK(meta["max_equiv_discrepancy"].get<double>() <= 1e-9);
    } else {
      CHECK(meta["max_equiv_discrepancy"].is_null());
    }
  }
}

TEST_CASE("asplund clamps by default and rejects extremes with --strict") {
  TempDir dir;
  save(dir / "f.pgm", row_image({0, 128, 255, 40}));
  save(dir / "b.pgm", row_image({100, 150}));
  AsplundOptions opt;
  opt.image = dir / "f.pgm";
  opt.probe = dir / "b.pgm";
  opt.out = dir / "map.aspf";
  std::ostringstream out, err;
  REQUIRE(cmd_asplund(opt, out, err) == kExitOk);
  CHECK(single_json_line(out.str())["clamped_pixels"] == 1);

  opt.strict = true;
  std::ostringstream out2, err2;
  CHECK(cmd_asplund(opt, out2, err2) == kExitValidation);
  CHECK(out2.str().empty());
  CHECK(err2.str().find("(0,0)") != std::string::npos);
}

TEST_CASE("asplund error exit codes") {
  TempDir dir;
  save(dir / "f.pgm", row_image({100, 150, 200}));
  save(dir / "big.pgm", row_image({1, 2, 3, 4}));
  AsplundOptions opt;
  opt.image = dir / "f.pgm";
  opt.probe = dir / "big.pgm";
  opt.out = dir / "map.aspf";
  std::ostringstream out, err;

  SUBCASE("probe larger than image") {
    CHECK(cmd_asplund(opt, out, err) == kExitValidation);
    CHECK(err.str().find("size") != std::string::npos);
  }
  SUBCASE("missing input") {
    opt.image = dir / "missing.pgm";
    CHECK(cmd_asplund(opt, out, err) == kExitIo);
  }
  SUBCASE("malformed PGM") {
    std::ofstream(dir / "bad.pgm") << "P2\n2 1\n255\n7\n";
    opt.image = dir / "bad.pgm";
    CHECK(cmd_asplund(opt, out, err) == kExitIo);
  }
  SUBCASE("unwritable output") {
    opt.probe = dir / "f.pgm";
    opt.out = dir / "no/such/dir/map.aspf";
    CHECK(cmd_asplund(opt, out, err) == kExitIo);
  }
  SUBCASE("mismatched grey-scale bounds") {
    save(dir / "deep.pgm", row_image({100, 150}, 65536.0));
    opt.probe = dir / "deep.pgm";
    CHECK(cmd_asplund(opt, out, err) == kExitValidation);
  }
  CHECK(out.str().empty());
}

TEST_CASE("asplund writes a preview and a masked probe is honoured") {
  TempDir dir;
  save(dir / "f.pgm", row_image({100, 150, 200, 90}));
  save(dir / "b.pgm", row_image({100, 7}));
  save(dir / "m.pgm", GreyImage(2, 1, LipScale(2.0), std::vector<double>{1, 0}));
  AsplundOptions opt;
  opt.image = dir / "f.pgm";
  opt.probe = dir / "b.pgm";
  opt.probe_mask = dir / "m.pgm";
  opt.out = dir / "map.aspf";
  opt.preview = dir / "map.pgm";
  std::ostringstream out, err;
  REQUIRE(cmd_asplund(opt, out, err) == kExitOk);
  // A single active cell makes every distance zero.
  const DistanceMap map = read_map(read_file(opt.out));
  for (double v : map.values) CHECK(v == 0.0);
  const GreyImage preview = read_pgm(read_file(*opt.preview));
  CHECK(preview.width == map.width);
  CHECK(preview.pixels == std::vector<double>(map.values.size(), 0.0));
}

TEST_CASE("lipmul") {
  TempDir dir;
  Rng rng(3);
  const GreyImage f = lipasp::testing::random_grey_image(rng, 9, 5, 0, 255);
  save(dir / "f.pgm", f, PgmVariant::P2);

  LipMulOptions opt;
  opt.image = dir / "f.pgm";
  opt.out = dir / "g.pgm";
  std::ostringstream out, err;

  SUBCASE("alpha 1 is the identity") {
    opt.alpha = 1.0;
    REQUIRE(cmd_lipmul(opt, out, err) == kExitOk);
    CHECK(slurp(opt.out) == slurp(opt.image));
    CHECK(single_json_line(out.str())["alpha"] == 1.0);
  }
  SUBCASE("alpha 2 on constant 128 gives constant 192") {
    save(dir / "c.pgm", GreyImage(4, 3, k8bit, 128.0));
    opt.image = dir / "c.pgm";
    opt.alpha = 2.0;
    REQUIRE(cmd_lipmul(opt, out, err) == kExitOk);
    const GreyImage g = read_pgm(read_file(opt.out));
    CHECK(g.pixels == std::vector<double>(12, 192.0));
    CHECK(slurp(opt.out).substr(0, 2) == "P5");
  }
  SUBCASE("large alpha stays inside the output depth") {
    opt.alpha = 50.0;
    REQUIRE(cmd_lipmul(opt, out, err) == kExitOk);
    const GreyImage g = read_pgm(read_file(opt.out));
    CHECK(g.scale == f.scale);
    for (std::size_t i = 0; i < g.pixels.size(); ++i) {
      CHECK(g.pixels[i] <= 255.0);
      CHECK(g.pixels[i] >= f.pixels[i]);
    }
  }
  SUBCASE("non-positive alpha") {
    for (double a : {0.0, -2.0}) {
      opt.alpha = a;
      CHECK(cmd_lipmul(opt, out, err) == kExitValidation);
    }
    CHECK(out.str().empty());
  }
}

TEST_CASE("lipmul then asplund: quantized illumination change stays close") {
  TempDir dir;
  Rng rng(8);
  const GreyImage f = lipasp::testing::random_grey_image(rng, 20, 20, 30, 200);
  const GreyImage b = lipasp::testing::random_grey_image(rng, 3, 3, 30, 200);
  save(dir / "f.pgm", f);
  save(dir / "b.pgm", b);
  std::ostringstream out, err;
  LipMulOptions lm;
  lm.image = dir / "f.pgm";
  lm.alpha = 1.5;
  lm.out = dir / "g.pgm";
  REQUIRE(cmd_lipmul(lm, out, err) == kExitOk);

  AsplundOptions a;
  a.probe = dir / "b.pgm";
  a.method = "gradient";
  a.image = dir / "f.pgm";
  a.out = dir / "f.aspf";
  REQUIRE(cmd_asplund(a, out, err) == kExitOk);
  a.image = dir / "g.pgm";
  a.out = dir / "g.aspf";
  REQUIRE(cmd_asplund(a, out, err) == kExitOk);
  const DistanceMap mf = read_map(read_file(dir / "f.aspf"));
  const DistanceMap mg = read_map(read_file(dir / "g.aspf"));
  // Integer rounding of the scaled image is the only source of difference.
  CHECK(max_abs_difference(mf, mg) > 0.0);
  CHECK(max_abs_difference(mf, mg) < 0.1);
}

TEST_CASE("morph") {
  TempDir dir;
  save(dir / "f.pgm", row_image({1, 5, 3}));
  MorphOptions opt;
  opt.image = dir / "f.pgm";
  opt.out = dir / "out.aspf";
  std::ostringstream out, err;

  SUBCASE("erode-add with a flat 2x1 sf, valid") {
    save(dir / "sf.pgm", row_image({0, 0}));
    opt.op = "erode-add";
    opt.sf = dir / "sf.pgm";
    REQUIRE(cmd_morph(opt, out, err) == kExitOk);
    CHECK(read_map(read_file(opt.out)).values == std::vector<double>{1, 3});
    const auto meta = single_json_line(out.str());
    CHECK(meta["op"] == "erode-add");
  }
  SUBCASE("dilate-add with a single zero cell is the identity") {
    save(dir / "sf.pgm", row_image({0}));
    opt.op = "dilate-add";
    opt.sf = dir / "sf.pgm";
    for (const char* border : {"valid", "replicate"}) {
      opt.border = border;
      REQUIRE(cmd_morph(opt, out, err) == kExitOk);
      CHECK(read_map(read_file(opt.out)).values == std::vector<double>{1, 5, 3});
    }
  }
  SUBCASE("output matches the library") {
    Rng rng(12);
    const GreyImage f = lipasp::testing::random_grey_image(rng, 11, 9);
    const GreyImage sf = lipasp::testing::random_grey_image(rng, 3, 2, 1, 9);
    save(dir / "g.pgm", f);
    save(dir / "sf.pgm", sf);
    opt.image = dir / "g.pgm";
    opt.sf = dir / "sf.pgm";
    const AdditiveSF asf = additive_sf_from_pgm(sf);
    for (const char* op : {"dilate-add", "erode-add", "dilate-mult", "erode-mult"}) {
      for (const char* border : {"valid", "replicate"}) {
        opt.op = op;
        opt.border = border;
        REQUIRE(cmd_morph(opt, out, err) == kExitOk);
        const auto bp = std::string(border) == "valid" ? BorderPolicy::valid
                                                       : BorderPolicy::replicate;
        const std::string o = op;
        const RealPlane expected = o == "dilate-add"  ? dilate_add(f.plane(), asf, bp)
                                   : o == "erode-add" ? erode_add(f.plane(), asf, bp)
                                   : o == "dilate-mult"
                                       ? dilate_mult(f.plane(), asf, bp)
                                       : erode_mult(f.plane(), asf, bp);
        const DistanceMap got = read_map(read_file(opt.out));
        CHECK(got.width == expected.width);
        CHECK(lipasp::testing::bit_identical(got.values, expected.values));
      }
    }
  }
  SUBCASE("multiplicative op on an image containing 0") {
    save(dir / "z.pgm", row_image({1, 0, 3}));
    save(dir / "sf.pgm", row_image({2}));
    opt.image = dir / "z.pgm";
    opt.sf = dir / "sf.pgm";
    opt.op = "dilate-mult";
    CHECK(cmd_morph(opt, out, err) == kExitValidation);
  }
  SUBCASE("unknown op or border") {
    save(dir / "sf.pgm", row_image({2}));
    opt.sf = dir / "sf.pgm";
    opt.op = "open";
    CHECK(cmd_morph(opt, out, err) == kExitValidation);
    opt.op = "dilate-add";
    opt.border = "wrap";
    CHECK(cmd_morph(opt, out, err) == kExitValidation);
  }
}

TEST_CASE("match") {
  TempDir dir;
  Rng rng(21);
  GreyImage f = lipasp::testing::random_grey_image(rng, 32, 24);
  // lip_mul(3, .) maps 64, 128, 192 onto the integers 148, 224, 252.
  const std::vector<double> probe_values{64, 128, 192, 192, 64, 128, 128, 192, 64};
  const GreyImage b(3, 3, k8bit, probe_values);
  save(dir / "b.pgm", b);

  MatchOptions opt;
  opt.image = dir / "f.pgm";
  opt.probe = dir / "b.pgm";
  opt.out = dir / "m.csv";
  std::ostringstream out, err;

  SUBCASE("planted lip_mul(3, B) patch is reported") {
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        f.at(10 + i, 7 + j) = std::round(lip_mul(3.0, b.at(i, j), k8bit));
    CHECK(f.at(10, 7) == 148.0);
    save(dir / "f.pgm", f);
    opt.threshold = 1e-6;
    REQUIRE(cmd_match(opt, out, err) == kExitOk);
    std::istringstream csv(slurp(opt.out));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "x,y,distance");
    REQUIRE(std::getline(csv, line));
    int x = -1, y = -1;
    double d = -1;
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%lf", &x, &y, &d) == 3);
    CHECK(x == 10);
    CHECK(y == 7);
    CHECK(d <= 1e-10);
    CHECK(!std::getline(csv, line));
    CHECK(single_json_line(out.str())["matches"] == 1);
  }
  SUBCASE("two planted patches are sorted by distance") {
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        f.at(20 + i, 2 + j) = b.at(i, j);
        f.at(3 + i, 15 + j) = b.at(i, j) + (i == 1 && j == 1 ? 2.0 : 0.0);
      }
    save(dir / "f.pgm", f);
    AsplundRequest req;
    req.image = f;
    req.probe = probe_from_pgm(b);
    const DistanceMap map = asplund_gradient(req);
    const double near = map.at(3, 15);
    REQUIRE(near > 1e-6);
    REQUIRE(near < 0.05);
    opt.threshold = near;
    REQUIRE(cmd_match(opt, out, err) == kExitOk);
    const std::string text = slurp(opt.out);
    CHECK(text.rfind("x,y,distance\n20,2,", 0) == 0);
    const auto second = text.find("\n3,15,");
    CHECK(second != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }
  SUBCASE("threshold 0 on a generic image gives a header-only CSV") {
    save(dir / "f.pgm", f);
    opt.threshold = 0.0;
    REQUIRE(cmd_match(opt, out, err) == kExitOk);
    CHECK(slurp(opt.out) == "x,y,distance\n");
  }
  SUBCASE("negative threshold") {
    save(dir / "f.pgm", f);
    opt.threshold = -1.0;
    CHECK(cmd_match(opt, out, err) == kExitValidation);
  }
}

TEST_CASE("bench") {
  TempDir dir;
  BenchOptions opt;
  opt.sizes = {24, 32};
  opt.windows = {1, 3, 5};
  opt.reps = 2;
  opt.out = dir / "bench.csv";
  std::ostringstream out, err;

  SUBCASE("flat probe CSV layout") {
    REQUIRE(cmd_bench(opt, out, err) == kExitOk);
    std::istringstream csv(slurp(opt.out));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "image_size,window,method,median_ms");
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == 2 * 3 * 3);
    const auto meta = single_json_line(out.str());
    CHECK(meta["seed"] == 42);
    CHECK(meta["probe"] == "flat");
  }
  SUBCASE("random probe omits the flat-only engine") {
    opt.flat_probe = false;
    const auto rows = run_bench(opt);
    CHECK(rows.size() == 2 * 3 * 2);
    for (const auto& r : rows) CHECK(r.method != "gradient-fast");
  }
  SUBCASE("structure is reproducible under a fixed seed") {
    const auto a = run_bench(opt);
    const auto b = run_bench(opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].image_size == b[i].image_size);
      CHECK(a[i].window == b[i].window);
      CHECK(a[i].method == b[i].method);
      CHECK(a[i].output_pixels == b[i].output_pixels);
    }
  }
  SUBCASE("window larger than the image") {
    opt.windows = {40};
    CHECK(cmd_bench(opt, out, err) == kExitValidation);
  }
}

TEST_CASE("argument parsing") {
  std::ostringstream out, err;
  CHECK(run_args({}, out, err) == kExitValidation);
  CHECK(run_args({"frobnicate"}, out, err) == kExitValidation);
  CHECK(run_args({"asplund", "--image", "x.pgm"}, out, err) == kExitValidation);
  CHECK(run_args({"asplund", "--image", "a", "--probe", "b", "--out", "c", "--method", "ratio"},
                 out, err) == kExitValidation);
  CHECK(run_args({"bench", "--flat-probe", "--random-probe", "--out", "x"}, out, err) ==
        kExitValidation);
  std::ostringstream help;
  CHECK(run_args({"--help"}, help, err) == kExitOk);
  CHECK(help.str().find("asplund") != std::string::npos);
}

TEST_CASE("run dispatches subcommands and parses list flags") {
  TempDir dir;
  const std::string csv = dir / "b.csv";
  std::ostringstream out, err;
  REQUIRE(run_args({"bench", "--sizes", "16,20", "--windows", "3,5", "--reps", "1",
                    "--random-probe", "--seed", "7", "--out", csv.c_str()},
                   out, err) == kExitOk);
  const auto meta = single_json_line(out.str());
  CHECK(meta["seed"] == 7);
  CHECK(meta["probe"] == "random");
  CHECK(meta["rows"] == 2 * 2 * 2);
  CHECK(err.str().find("seed 7") != std::string::npos);
}

TEST_CASE("installed binary: exit codes and metadata on stdout") {
  TempDir dir;
  save(dir / "f.pgm", row_image({100, 150, 200}));
  save(dir / "b.pgm", row_image({100, 150}));
  const std::string bin = LIPASP_CLI_PATH;
  const std::string base = "\"" + bin + "\" asplund --image \"" + (dir / "f.pgm") +
                           "\" --out \"" + (dir / "m.aspf") + "\" --probe ";
  const std::string stdout_path = dir / "stdout.txt";
  const int ok = std::system((base + "\"" + (dir / "b.pgm") + "\" > \"" + stdout_path +
                              "\" 2>/dev/null").c_str());
  REQUIRE(WIFEXITED(ok));
  CHECK(WEXITSTATUS(ok) == 0);
  CHECK(single_json_line(slurp(stdout_path))["command"] == "asplund");

  const int missing = std::system((base + "\"" + (dir / "none.pgm") + "\" >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(missing));
  CHECK(WEXITSTATUS(missing) == 1);
  const int usage = std::system(("\"" + bin + "\" asplund >/dev/null 2>&1").c_str());
  REQUIRE(WIFEXITED(usage));
  CHECK(WEXITSTATUS(usage) == 2);
}
