#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lipasp::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,           // I/O, parse or encode failure
  kExitValidation = 2,   // bad arguments or input data
  kExitEquivalence = 3,  // ratio and gradient maps disagree
};

struct AsplundOptions {
  std::string image;
  std::string probe;
  std::optional<std::string> probe_mask;
  std::string out;
  std::string method = "both";
  std::optional<std::string> preview;
  double ceiling = 1.0;
  bool strict = false;
};

struct LipMulOptions {
  std::string image;
  double alpha = 1.0;
  std::string out;
};

struct MorphOptions {
  std::string op;  // dilate-add | erode-add | dilate-mult | erode-mult
  std::string image;
  std::string sf;
  std::optional<std::string> sf_mask;
  std::string border = "valid";
  std::string out;
};

struct MatchOptions {
  std::string image;
  std::string probe;
  std::optional<std::string> probe_mask;
  double threshold = 0.0;
  std::string out;
  bool strict = false;
};

struct BenchOptions {
  std::vector<int> sizes{256, 512};
  std::vector<int> windows{7, 15, 21, 31};
  int reps = 5;
  bool flat_probe = true;
  std::string out;
  std::uint64_t seed = 42;
};

struct BenchRow {
  int image_size = 0;
  int window = 0;
  std::string method;  // direct | gradient-naive | gradient-fast
  double median_ms = 0.0;
  std::size_t output_pixels = 0;
};

// Each command writes its single-line JSON metadata record to `out` on
// success and diagnostics to `err`, and returns an ExitCode.
int cmd_asplund(const AsplundOptions& opt, std::ostream& out, std::ostream& err);
int cmd_lipmul(const LipMulOptions& opt, std::ostream& out, std::ostream& err);
int cmd_morph(const MorphOptions& opt, std::ostream& out, std::ostream& err);
int cmd_match(const MatchOptions& opt, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err);

/// Times direct, gradient-naive and (flat probes only) gradient-fast on
/// seeded random 8-bit images: one warmup, then the median of `reps` runs.
std::vector<BenchRow> run_bench(const BenchOptions& opt);

/// Full command-line entry point (subcommand parsing included).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lipasp::cli
