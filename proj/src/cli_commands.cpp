#include "lipasp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lipasp/asplund.hpp"
#include "lipasp/errors.hpp"
#include "lipasp/image_io.hpp"
#include "lipasp/lip_core.hpp"
#include "lipasp/morphology.hpp"

namespace lipasp::cli {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

GreyImage load_pgm(const std::string& path) { return read_pgm(read_file(path)); }

std::optional<GreyImage> load_optional(const std::optional<std::string>& path) {
  if (!path) return std::nullopt;
  return load_pgm(*path);
}

// Runs `body`, translating library exceptions into exit codes.
int guarded(const char* command, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const EquivalenceError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitEquivalence;
  } catch (const IoError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    err << command << ": parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EncodeError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitIo;
  } catch (const SizeError& e) {
    err << command << ": size error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << command << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << command << ": validation error: " << e.what() << '\n';
    return kExitValidation;
  }
}

std::optional<AsplundMethod> parse_method(const std::string& s) {
  if (s == "direct") return AsplundMethod::direct;
  if (s == "gradient") return AsplundMethod::gradient;
  if (s == "both") return AsplundMethod::both;
  return std::nullopt;
}

SanitationPolicy policy_for(bool strict) {
  return strict ? SanitationPolicy::strict() : SanitationPolicy::clamp();
}

std::string format_real(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Portable across standard libraries, unlike std::uniform_int_distribution.
double random_grey(std::mt19937_64& rng) { return static_cast<double>(rng() % 255 + 1); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int cmd_asplund(const AsplundOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("asplund", err, [&] {
    const auto start = Clock::now();
    const auto method = parse_method(opt.method);
    if (!method) throw ValidationError("unknown method '" + opt.method + "'");
    if (opt.preview && !(opt.ceiling > 0.0)) throw ValidationError("--ceiling must be > 0");

    AsplundRequest req;
    req.image = load_pgm(opt.image);
    req.probe = probe_from_pgm(load_pgm(opt.probe), load_optional(opt.probe_mask));
    req.method = *method;
    req.sanitation = policy_for(opt.strict);

    const AsplundResult result = compute_asplund(req);
    write_file(opt.out, write_map(result.map));
    if (opt.preview) {
      write_file(*opt.preview, write_pgm(quantize_map(result.map, opt.ceiling), PgmVariant::P5));
    }

    json meta = {{"command", "asplund"},
                 {"method", opt.method},
                 {"image_path", opt.image},
                 {"probe_path", opt.probe},
                 {"M", req.image.scale.bound()},
                 {"clamped_pixels", result.clamped_pixels},
                 {"max_equiv_discrepancy", nullptr},
                 {"map_width", result.map.width},
                 {"map_height", result.map.height},
                 {"wall_time_ms", ms_since(start)}};
    if (result.max_discrepancy) meta["max_equiv_discrepancy"] = *result.max_discrepancy;
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

int cmd_lipmul(const LipMulOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("lipmul", err, [&] {
    const auto start = Clock::now();
    if (!(opt.alpha > 0.0) || !std::isfinite(opt.alpha)) {
      throw ValidationError("--alpha must be a finite positive number");
    }
    const Bytes raw = read_file(opt.image);
    const GreyImage image = read_pgm(raw);
    GreyImage scaled = lip_mul(opt.alpha, image);
    // Rounding can reach M itself; keep the result inside the output depth.
    const double maxval = image.scale.bound() - 1.0;
    for (double& v : scaled.pixels) v = std::min(std::round(v), maxval);
    const auto variant = raw[1] == '2' ? PgmVariant::P2 : PgmVariant::P5;
    write_file(opt.out, write_pgm(scaled, variant));

    json meta = {{"command", "lipmul"},
                 {"image_path", opt.image},
                 {"alpha", opt.alpha},
                 {"M", image.scale.bound()},
                 {"wall_time_ms", ms_since(start)}};
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

int cmd_morph(const MorphOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("morph", err, [&] {
    const auto start = Clock::now();
    BorderPolicy border;
    if (opt.border == "valid") {
      border = BorderPolicy::valid;
    } else if (opt.border == "replicate") {
      border = BorderPolicy::replicate;
    } else {
      throw ValidationError("unknown border policy '" + opt.border + "'");
    }
    const RealPlane plane = load_pgm(opt.image).plane();
    const AdditiveSF sf = additive_sf_from_pgm(load_pgm(opt.sf), load_optional(opt.sf_mask));

    RealPlane result;
    Coord origin;
    if (opt.op == "dilate-add") {
      result = dilate_add(plane, sf, border);
      origin = dilation_valid_origin(sf);
    } else if (opt.op == "erode-add") {
      result = erode_add(plane, sf, border);
      origin = erosion_valid_origin(sf);
    } else if (opt.op == "dilate-mult") {
      result = dilate_mult(plane, sf, border);
      origin = dilation_valid_origin(sf);
    } else if (opt.op == "erode-mult") {
      result = erode_mult(plane, sf, border);
      origin = erosion_valid_origin(sf);
    } else {
      throw ValidationError("unknown morphology op '" + opt.op + "'");
    }
    if (border == BorderPolicy::replicate) origin = {};

    DistanceMap map;
    map.width = result.width;
    map.height = result.height;
    map.origin = origin;
    map.values = std::move(result.values);
    write_file(opt.out, write_map(map));

    json meta = {{"command", "morph"},
                 {"op", opt.op},
                 {"border", opt.border},
                 {"image_path", opt.image},
                 {"sf_path", opt.sf},
                 {"wall_time_ms", ms_since(start)}};
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

int cmd_match(const MatchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("match", err, [&] {
    const auto start = Clock::now();
    if (!(opt.threshold >= 0.0)) throw ValidationError("--threshold must be >= 0");
    AsplundRequest req;
    req.image = load_pgm(opt.image);
    req.probe = probe_from_pgm(load_pgm(opt.probe), load_optional(opt.probe_mask));
    req.method = AsplundMethod::gradient;
    req.sanitation = policy_for(opt.strict);
    const AsplundResult result = compute_asplund(req);
    const auto hits = match_threshold(result.map, opt.threshold);

    std::string csv = "x,y,distance\n";
    for (const Match& m : hits) {
      csv += std::to_string(m.x) + "," + std::to_string(m.y) + "," + format_real(m.value) + "\n";
    }
    write_file(opt.out, std::span(reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()));

    json meta = {{"command", "match"},
                 {"method", "gradient"},
                 {"image_path", opt.image},
                 {"probe_path", opt.probe},
                 {"M", req.image.scale.bound()},
                 {"clamped_pixels", result.clamped_pixels},
                 {"threshold", opt.threshold},
                 {"matches", hits.size()},
                 {"wall_time_ms", ms_since(start)}};
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

std::vector<BenchRow> run_bench(const BenchOptions& opt) {
  if (opt.reps < 1) throw ValidationError("--reps must be >= 1");
  std::vector<BenchRow> rows;
  std::mt19937_64 rng(opt.seed);
  for (int size : opt.sizes) {
    if (size < 1) throw ValidationError("image sizes must be >= 1");
    AsplundRequest req;
    req.image = GreyImage(size, size, LipScale(256.0));
    for (double& v : req.image.pixels) v = random_grey(rng);

    for (int window : opt.windows) {
      if (window < 1 || window > size) {
        throw ValidationError("window " + std::to_string(window) + " does not fit image size " +
                              std::to_string(size));
      }
      std::vector<double> probe_values(static_cast<std::size_t>(window) * window, 128.0);
      if (!opt.flat_probe) {
        for (double& v : probe_values) v = random_grey(rng);
      }
      req.probe = StructuringFunction(window, window, LipScale(256.0), std::move(probe_values));

      using Runner = std::function<DistanceMap()>;
      std::vector<std::pair<std::string, Runner>> methods = {
          {"direct", [&] { return asplund_direct(req); }},
          {"gradient-naive", [&] { return asplund_gradient(req, MorphEngine::naive); }},
      };
      if (opt.flat_probe) {
        methods.emplace_back("gradient-fast",
                             [&] { return asplund_gradient(req, MorphEngine::fast); });
      }
      for (const auto& [name, runner] : methods) {
        DistanceMap warm = runner();
        std::vector<double> samples;
        for (int r = 0; r < opt.reps; ++r) {
          const auto start = Clock::now();
          const DistanceMap m = runner();
          samples.push_back(ms_since(start));
        }
        rows.push_back({size, window, name, median(samples), warm.values.size()});
      }
    }
  }
  return rows;
}

int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("bench", err, [&] {
    const auto start = Clock::now();
    const auto rows = run_bench(opt);
    std::ostringstream csv;
    csv << "image_size,window,method,median_ms\n";
    for (const auto& r : rows) {
      csv << r.image_size << ',' << r.window << ',' << r.method << ',' << std::fixed
          << std::setprecision(4) << r.median_ms << '\n';
    }
    const std::string text = csv.str();
    write_file(opt.out,
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    json meta = {{"command", "bench"},
                 {"seed", opt.seed},
                 {"probe", opt.flat_probe ? "flat" : "random"},
                 {"reps", opt.reps},
                 {"rows", rows.size()},
                 {"wall_time_ms", ms_since(start)}};
    out << meta.dump() << '\n';
    return kExitOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asplund distance maps under the LIP multiplication"};
  app.require_subcommand(1);
  std::function<int()> action;

  AsplundOptions asp;
  auto* c_asp = app.add_subcommand("asplund", "Compute the map of Asplund distances");
  c_asp->add_option("--image", asp.image, "Input image (PGM)")->required();
  c_asp->add_option("--probe", asp.probe, "Probe (PGM)")->required();
  c_asp->add_option("--probe-mask", asp.probe_mask, "Probe support mask (PGM, nonzero = active)");
  c_asp->add_option("--out", asp.out, "Output map (ASPF)")->required();
  c_asp->add_option("--method", asp.method, "direct | gradient | both")
      ->check(CLI::IsMember({"direct", "gradient", "both"}));
  c_asp->add_option("--png-preview", asp.preview, "8-bit preview of the map (PGM)");
  c_asp->add_option("--ceiling", asp.ceiling, "Distance shown as white in the preview");
  c_asp->add_flag("--strict", asp.strict, "Reject grey levels 0 and M instead of clamping");
  c_asp->callback([&] { action = [&] { return cmd_asplund(asp, out, err); }; });

  LipMulOptions lm;
  auto* c_lm = app.add_subcommand("lipmul", "LIP-multiply an image by a scalar");
  c_lm->add_option("--image", lm.image)->required();
  c_lm->add_option("--alpha", lm.alpha)->required();
  c_lm->add_option("--out", lm.out)->required();
  c_lm->callback([&] { action = [&] { return cmd_lipmul(lm, out, err); }; });

  MorphOptions mo;
  auto* c_mo = app.add_subcommand("morph", "Grey-scale dilation/erosion on raw grey values");
  c_mo->add_option("--op", mo.op, "dilate-add | erode-add | dilate-mult | erode-mult")
      ->required()
      ->check(CLI::IsMember({"dilate-add", "erode-add", "dilate-mult", "erode-mult"}));
  c_mo->add_option("--image", mo.image)->required();
  c_mo->add_option("--sf", mo.sf, "Structuring function (PGM)")->required();
  c_mo->add_option("--sf-mask", mo.sf_mask);
  c_mo->add_option("--border", mo.border)->check(CLI::IsMember({"valid", "replicate"}));
  c_mo->add_option("--out", mo.out, "Output plane (ASPF)")->required();
  c_mo->callback([&] { action = [&] { return cmd_morph(mo, out, err); }; });

  MatchOptions ma;
  auto* c_ma = app.add_subcommand("match", "List probe matches below a distance threshold");
  c_ma->add_option("--image", ma.image)->required();
  c_ma->add_option("--probe", ma.probe)->required();
  c_ma->add_option("--probe-mask", ma.probe_mask);
  c_ma->add_option("--threshold", ma.threshold)->required();
  c_ma->add_option("--out", ma.out, "Output CSV")->required();
  c_ma->add_flag("--strict", ma.strict);
  c_ma->callback([&] { action = [&] { return cmd_match(ma, out, err); }; });

  BenchOptions be;
  auto* c_be = app.add_subcommand("bench", "Time the ratio form against the gradient forms");
  c_be->add_option("--sizes", be.sizes)->delimiter(',');
  c_be->add_option("--windows", be.windows)->delimiter(',');
  c_be->add_option("--reps", be.reps);
  auto* flat = c_be->add_flag("--flat-probe", "Constant probe (default)");
  auto* random = c_be->add_flag("--random-probe", "Random probe values");
  flat->excludes(random);
  c_be->add_option("--seed", be.seed);
  c_be->add_option("--out", be.out, "Output CSV")->required();
  c_be->callback([&] {
    be.flat_probe = random->count() == 0;
    action = [&] {
      err << "bench: seed " << be.seed << '\n';
      return cmd_bench(be, out, err);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  return action ? action() : kExitValidation;
}

}  // namespace lipasp::cli
