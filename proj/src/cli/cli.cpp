#include "thetapolar/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "thetapolar/analysis.hpp"
#include "thetapolar/functionals.hpp"
#include "thetapolar/optimizer.hpp"
#include "thetapolar/theta.hpp"

#ifndef THETAPOLAR_VERSION_STRING
#define THETAPOLAR_VERSION_STRING "0.0.0"
#endif

namespace thetapolar::cli {

const char* tool_version() { return THETAPOLAR_VERSION_STRING; }

namespace {

using json = nlohmann::ordered_json;

std::string format_time(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string manifest_timestamp(const std::string& override_text) {
  if (!override_text.empty()) return override_text;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (errno != 0 || *end != '\0' || v < 0) throw ValidationError("SOURCE_DATE_EPOCH is not a non-negative integer");
    return format_time(static_cast<std::time_t>(v));
  }
  return format_time(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now()));
}

Configuration parse_points_json(const std::string& text, const PrecisionContext& ctx) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("points file is not valid JSON: ") + e.what());
  }
  const json* list = &doc;
  std::optional<long> declared;
  if (doc.is_object()) {
    if (!doc.contains("points")) throw ValidationError("points file: missing \"points\" array");
    list = &doc["points"];
    if (doc.contains("n")) {
      const json& n = doc["n"];
      if (n.is_number_integer()) {
        declared = n.get<long>();
      } else if (n.is_string()) {
        try {
          size_t used = 0;
          declared = std::stol(n.get<std::string>(), &used);
          if (used != n.get<std::string>().size()) throw std::invalid_argument("n");
        } catch (const std::exception&) {
          throw ValidationError("points file: \"n\" is not an integer");
        }
      } else {
        throw ValidationError("points file: \"n\" is not an integer");
      }
    }
  }
  if (!list->is_array()) throw ValidationError("points file: expected an array of decimal strings");
  if (list->empty()) throw ValidationError("points file: no points");
  std::vector<Real> points;
  points.reserve(list->size());
  for (size_t i = 0; i < list->size(); ++i) {
    const json& entry = (*list)[i];
    if (!entry.is_string()) throw ValidationError("points[" + std::to_string(i) + "]: expected a decimal string");
    auto value = ctx.parse(entry.get<std::string>());
    if (!value) {
      throw ValidationError("points[" + std::to_string(i) + "]: not a decimal number: \"" + entry.get<std::string>() +
                            "\"");
    }
    points.push_back(std::move(*value));
  }
  if (declared && *declared != static_cast<long>(points.size())) {
    throw ValidationError("points file: n = " + std::to_string(*declared) + " but " + std::to_string(points.size()) +
                          " points given");
  }
  try {
    return Configuration::from_points(std::move(points), ctx);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("points file: ") + e.what());
  }
}

namespace {

struct Globals {
  std::optional<int> digits;
  std::string out_path;
  bool json_flag = false;
  bool csv_flag = false;
  unsigned threads = 1;
  std::string timestamp;
  std::uint64_t seed = 0;
};

struct PointsSource {
  std::string file;
  long equispaced = 0;
  long random = 0;
};

/// Output of one command: a JSON document or CSV text.
struct Payload {
  bool is_csv = false;
  json document;
  std::string csv_header;
  std::vector<std::vector<std::string>> rows;
  /// JSON summary written to stdout when CSV goes to --out.
  std::optional<json> side_document;
};

int resolve_digits(const std::optional<int>& flag) {
  int digits = kDefaultPrecisionDigits;
  if (flag) {
    digits = *flag;
  } else if (const char* env = std::getenv(kPrecisionEnv); env && *env) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (errno != 0 || *end != '\0') throw ValidationError(std::string(kPrecisionEnv) + " is not an integer");
    digits = static_cast<int>(std::clamp(v, -1L, 1000000L));
  }
  if (digits < 1 || digits > 100000) throw ValidationError("precision digits must be in 1..100000");
  return digits;
}

Real parse_real(const std::string& flag, const std::string& text, const PrecisionContext& ctx) {
  auto v = ctx.parse(text);
  if (!v) throw ValidationError(flag + ": not a decimal number: \"" + text + "\"");
  return std::move(*v);
}

ThetaParams parse_alpha(const std::string& text, const PrecisionContext& ctx) {
  Real a = parse_real("--alpha", text, ctx);
  if (!(a > 0L)) throw ValidationError("--alpha must be positive");
  return ThetaParams(std::move(a));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Runner {
 public:
  Runner(const Globals& g, std::string subcommand) : g_(g) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.precision_digits = resolve_digits(g.digits);
    manifest_.seed = g.seed;
    manifest_.tool_version = tool_version();
    manifest_.timestamp = manifest_timestamp(g.timestamp);
    ctx_ = PrecisionContext::from_digits(manifest_.precision_digits);
  }

  const PrecisionContext& ctx() const { return ctx_; }
  int digits() const { return manifest_.precision_digits; }
  unsigned threads() const { return std::max(g_.threads, 1u); }
  std::uint64_t seed() const { return g_.seed; }
  void param(const std::string& key, const std::string& value) { manifest_.parameters[key] = value; }

  std::string num(const Real& v) const {
    if (!v.is_finite()) return v.sign() < 0 ? "-inf" : (v.sign() > 0 ? "inf" : "nan");
    return v.to_decimal(digits());
  }

  Configuration load_points(const PointsSource& src) {
    const int given = !src.file.empty() + (src.equispaced != 0) + (src.random != 0);
    if (given != 1) throw ValidationError("give exactly one of --points, --equispaced, --random");
    if (!src.file.empty()) {
      param("points", src.file);
      return parse_points_json(read_file(src.file), ctx_);
    }
    if (src.equispaced != 0) {
      if (src.equispaced < 1) throw ValidationError("--equispaced must be at least 1");
      param("equispaced", std::to_string(src.equispaced));
      return equispaced(src.equispaced, ctx_);
    }
    if (src.random < 1) throw ValidationError("--random must be at least 1");
    param("random", std::to_string(src.random));
    auto rng = instance_rng(g_.seed, 0);
    return random_configuration(src.random, rng, 0.0, ctx_);
  }

  json manifest_json() const {
    json params = json::object();
    for (const auto& [k, v] : manifest_.parameters) params[k] = v;
    json m;
    m["subcommand"] = manifest_.subcommand;
    m["parameters"] = std::move(params);
    m["seed"] = std::to_string(manifest_.seed);
    m["precision_digits"] = std::to_string(manifest_.precision_digits);
    m["tool_version"] = manifest_.tool_version;
    m["timestamp"] = manifest_.timestamp;
    return m;
  }

  json points_json(const Configuration& c) const {
    json a = json::array();
    for (const auto& x : c.points()) a.push_back(num(x));
    return a;
  }

  std::string render(Payload& p) const {
    if (!p.is_csv) {
      p.document["manifest"] = manifest_json();
      return p.document.dump(2) + "\n";
    }
    std::string s = "# manifest: " + manifest_json().dump() + "\n" + p.csv_header + "\n";
    for (const auto& row : p.rows) {
      for (size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + row[i];
      s += "\n";
    }
    return s;
  }

  std::string render_side(json doc) const {
    doc["manifest"] = manifest_json();
    return doc.dump(2) + "\n";
  }

 private:
  Globals g_;
  RunManifest manifest_;
  PrecisionContext ctx_;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

enum class Format { json, csv, plain };

Format pick_format(const Globals& g, Format fallback) {
  if (g.json_flag) return Format::json;
  if (g.csv_flag) return Format::csv;
  return fallback;
}

std::vector<std::vector<std::string>> curve_rows(const Runner& r, const std::vector<std::pair<Real, Real>>& curve) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(curve.size());
  for (const auto& [x, v] : curve) rows.push_back({r.num(x), r.num(v)});
  return rows;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta sums, polarization and covering of periodic point configurations", "thetapolar"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  Globals g;
  app.add_option("--precision-digits", g.digits, "Working precision in decimal digits (default 80, or $" +
                                                      std::string(kPrecisionEnv) + ")");
  app.add_option("--out", g.out_path, "Write the output to this file instead of stdout");
  auto* json_opt = app.add_flag("--json", g.json_flag, "JSON output");
  auto* csv_opt = app.add_flag("--csv", g.csv_flag, "CSV output");
  json_opt->excludes(csv_opt);
  app.add_option("--threads", g.threads, "Worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
  app.add_option("--timestamp", g.timestamp, "Manifest timestamp (default $SOURCE_DATE_EPOCH or now)");
  app.add_option("--seed", g.seed, "Random seed");

  auto add_points = [](CLI::App* sub, PointsSource& src) {
    sub->add_option("--points", src.file, "JSON file of decimal strings");
    sub->add_option("--equispaced", src.equispaced, "Use {k/n}");
    sub->add_option("--random", src.random, "Random configuration of n points drawn from --seed");
  };

  // theta eval
  auto* theta = app.add_subcommand("theta", "Evaluate theta(x; alpha)");
  theta->require_subcommand(1);
  auto* theta_eval = theta->add_subcommand("eval", "Evaluate theta(x; alpha)");
  std::string te_alpha, te_x, te_method = "series";
  theta_eval->add_option("--alpha", te_alpha)->required();
  theta_eval->add_option("--x", te_x)->required();
  theta_eval->add_option("--method", te_method)->check(CLI::IsMember({"series", "product", "dual"}));

  // polarize
  auto* polarize = app.add_subcommand("polarize", "Certified minimum and maximum of the configuration sum");
  std::string pz_alpha;
  PointsSource pz_points;
  std::size_t pz_curve = 0;
  polarize->add_option("--alpha", pz_alpha)->required();
  add_points(polarize, pz_points);
  polarize->add_option("--emit-curve", pz_curve, "Write m samples (x, f(x)) as CSV");

  // energy
  auto* energy_cmd = app.add_subcommand("energy", "Theta energy of a configuration");
  std::string en_alpha;
  PointsSource en_points;
  energy_cmd->add_option("--alpha", en_alpha)->required();
  add_points(energy_cmd, en_points);

  // sample-error
  auto* sample = app.add_subcommand("sample-error", "Worst-case sampling error at width t");
  std::string se_t;
  PointsSource se_points;
  sample->add_option("--t", se_t)->required();
  add_points(sample, se_points);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Multi-start local ascent or grid oracle");
  std::string op_alpha, op_objective = "max-min";
  long op_n = 0;
  int op_starts = 32;
  bool op_oracle = false;
  double op_step = 1e-3;
  optimize->add_option("--alpha", op_alpha)->required();
  optimize->add_option("--n", op_n)->required();
  optimize->add_option("--objective", op_objective)->check(CLI::IsMember({"max-min", "min-max"}));
  optimize->add_option("--starts", op_starts)->check(CLI::Range(1, 100000));
  optimize->add_flag("--oracle", op_oracle, "Exhaustive grid search instead of ascent");
  auto* step_opt = optimize->add_option("--step", op_step, "Oracle grid step");

  // sweep-one
  auto* sweep = app.add_subcommand("sweep-one", "Polarization as one point moves");
  std::string sw_alpha;
  long sw_n = 0;
  std::size_t sw_samples = 1000;
  sweep->add_option("--alpha", sw_alpha)->required();
  sweep->add_option("--n", sw_n)->required();
  sweep->add_option("--samples", sw_samples)->check(CLI::Range(std::size_t{1}, std::size_t{10000000}));

  // verify
  auto* verify = app.add_subcommand("verify", "Randomized lemma suite");
  std::string vf_lemma;
  long vf_trials = 1000;
  verify->add_option("--lemma", vf_lemma)->required()->check(CLI::IsMember(lemma_names()));
  verify->add_option("--trials", vf_trials)->check(CLI::Range(1L, 100000000L));

  // split
  auto* split = app.add_subcommand("split", "Frequency split A + g1 + g2 + h of the configuration sum");
  std::string sp_alpha;
  PointsSource sp_points;
  std::size_t sp_samples = 16;
  split->add_option("--alpha", sp_alpha)->required();
  add_points(split, sp_points);
  split->add_option("--samples", sp_samples, "Sample points i/m for the reconstruction check")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));

  // decompose
  auto* decompose_cmd = app.add_subcommand("decompose", "Shift and sum-zero residuals of a near-equispaced configuration");
  PointsSource dc_points;
  add_points(decompose_cmd, dc_points);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitValidation;
  }

  try {
    std::string text;
    std::optional<std::string> side;
    auto finish = [&](Runner& r, Payload& p) {
      text = r.render(p);
      if (p.side_document) side = r.render_side(*p.side_document);
    };

    if (*theta_eval) {
      Runner r(g, "theta eval");
      const ThetaParams p = parse_alpha(te_alpha, r.ctx());
      const Real x = parse_real("--x", te_x, r.ctx());
      r.param("alpha", te_alpha);
      r.param("x", te_x);
      r.param("method", te_method);
      const Real v = te_method == "product" ? theta_product(x, p, r.ctx())
                     : te_method == "dual"  ? theta_dual(x, p, r.ctx())
                                            : theta_series(x, p, r.ctx());
      const Format f = pick_format(g, Format::plain);
      if (f == Format::plain) {
        text = r.num(v) + "\n";
      } else {
        Payload pl;
        pl.is_csv = f == Format::csv;
        pl.document["value"] = r.num(v);
        pl.csv_header = "x,theta";
        pl.rows.push_back({r.num(x), r.num(v)});
        finish(r, pl);
      }
    } else if (*polarize) {
      Runner r(g, "polarize");
      const ThetaParams p = parse_alpha(pz_alpha, r.ctx());
      r.param("alpha", pz_alpha);
      const Configuration c = r.load_points(pz_points);
      const ExtremaPair ex = certify_extrema(c, p, r.ctx());
      json doc;
      doc["n"] = std::to_string(c.n());
      doc["polarization"] = r.num(ex.min.value);
      doc["covering"] = r.num(ex.max.value);
      json argmin = json::array(), argmax = json::array();
      for (const auto& x : ex.min.extremizers) argmin.push_back(r.num(x));
      for (const auto& x : ex.max.extremizers) argmax.push_back(r.num(x));
      doc["argmin"] = std::move(argmin);
      doc["argmax"] = std::move(argmax);
      doc["enclosure"] = r.num(ex.min.enclosure > ex.max.enclosure ? ex.min.enclosure : ex.max.enclosure);
      doc["certified"] = ex.min.certified && ex.max.certified;
      Payload pl;
      if (pz_curve > 0) {
        r.param("emit_curve", std::to_string(pz_curve));
        if (g.json_flag) throw ValidationError("--emit-curve writes CSV; drop --json");
        pl.is_csv = true;
        pl.csv_header = "x,f";
        pl.rows = curve_rows(r, config_curve(c, p, pz_curve, r.ctx()));
        if (!g.out_path.empty()) pl.side_document = std::move(doc);
      } else {
        if (g.csv_flag) throw ValidationError("polarize writes CSV only with --emit-curve");
        pl.document = std::move(doc);
      }
      finish(r, pl);
    } else if (*energy_cmd) {
      Runner r(g, "energy");
      if (g.csv_flag) throw ValidationError("energy has no CSV output");
      const ThetaParams p = parse_alpha(en_alpha, r.ctx());
      r.param("alpha", en_alpha);
      const Configuration c = r.load_points(en_points);
      const EnergyValue e = energy(c, p, r.ctx());
      Payload pl;
      pl.document["n"] = std::to_string(e.n);
      pl.document["alpha"] = r.num(e.alpha);
      pl.document["energy"] = r.num(e.value);
      finish(r, pl);
    } else if (*sample) {
      Runner r(g, "sample-error");
      if (g.csv_flag) throw ValidationError("sample-error has no CSV output");
      const Real t = parse_real("--t", se_t, r.ctx());
      if (!(t > 0L)) throw ValidationError("--t must be positive");
      r.param("t", se_t);
      const Configuration c = r.load_points(se_points);
      const ThetaParams p(t);
      const ExtremaPair ex = certify_extrema(c, p, r.ctx());
      Payload pl;
      pl.document["n"] = std::to_string(c.n());
      pl.document["t"] = r.num(t);
      pl.document["worst_case_error"] = r.num(sampling_worst_case_error(c, t, r.ctx()));
      pl.document["polarization"] = r.num(ex.min.value);
      pl.document["covering"] = r.num(ex.max.value);
      finish(r, pl);
    } else if (*optimize) {
      Runner r(g, "optimize");
      const ThetaParams p = parse_alpha(op_alpha, r.ctx());
      if (op_n < 1) throw ValidationError("--n must be at least 1");
      const Objective obj = *parse_objective(op_objective);
      r.param("alpha", op_alpha);
      r.param("n", std::to_string(op_n));
      r.param("objective", op_objective);
      if (!op_oracle && step_opt->count() > 0) throw ValidationError("--step needs --oracle");
      OptimizationResult best;
      std::vector<OptimizationResult> runs;
      if (op_oracle) {
        std::ostringstream step_text;
        step_text << op_step;
        r.param("oracle", "true");
        r.param("step", step_text.str());
        best = brute_force_oracle(op_n, p, op_step, obj, r.ctx(), r.threads());
      } else {
        r.param("starts", std::to_string(op_starts));
        MultiStartOptions o;
        o.starts = op_starts;
        o.seed = r.seed();
        o.threads = r.threads();
        MultiStartResult ms = multi_start(op_n, p, obj, r.ctx(), o);
        best = std::move(ms.best);
        runs = std::move(ms.runs);
      }
      Payload pl;
      const Format f = pick_format(g, Format::json);
      if (f == Format::csv) {
        pl.is_csv = true;
        pl.csv_header = "iteration,value";
        for (const auto& t : best.trace) pl.rows.push_back({std::to_string(t.iteration), r.num(t.value)});
      } else {
        json& d = pl.document;
        d["objective"] = objective_name(obj);
        d["method"] = op_oracle ? "oracle" : "multi-start";
        d["n"] = std::to_string(op_n);
        d["value"] = r.num(best.value);
        d["points"] = r.points_json(best.best);
        d["distance_to_equispaced"] = r.num(best.distance_to_equispaced);
        d["iterations"] = std::to_string(best.iterations);
        d["accepted_steps"] = std::to_string(best.accepted_steps);
        d["converged"] = best.converged;
        json trace = json::array();
        for (const auto& t : best.trace) trace.push_back({{"iteration", std::to_string(t.iteration)}, {"value", r.num(t.value)}});
        d["trace"] = std::move(trace);
        if (!runs.empty()) {
          json rs = json::array();
          long good = 0;
          for (size_t i = 0; i < runs.size(); ++i) {
            const auto& run_i = runs[i];
            good += run_i.distance_to_equispaced.is_finite() && run_i.distance_to_equispaced <= 1e-15;
            rs.push_back({{"start", std::to_string(i)},
                          {"value", r.num(run_i.value)},
                          {"distance_to_equispaced", r.num(run_i.distance_to_equispaced)},
                          {"iterations", std::to_string(run_i.iterations)},
                          {"converged", run_i.converged}});
          }
          d["starts_near_equispaced"] = std::to_string(good);
          d["runs"] = std::move(rs);
        }
      }
      finish(r, pl);
    } else if (*sweep) {
      Runner r(g, "sweep-one");
      const ThetaParams p = parse_alpha(sw_alpha, r.ctx());
      if (sw_n < 2) throw ValidationError("--n must be at least 2");
      r.param("alpha", sw_alpha);
      r.param("n", std::to_string(sw_n));
      r.param("samples", std::to_string(sw_samples));
      const SweepCurve curve = one_point_sweep(sw_n, p, sw_samples, r.ctx(), r.threads());
      Payload pl;
      if (pick_format(g, Format::csv) == Format::csv) {
        pl.is_csv = true;
        pl.csv_header = "x1,polarization";
        pl.rows = curve_rows(r, curve.samples);
      } else {
        json s = json::array();
        for (const auto& [x, v] : curve.samples) s.push_back({r.num(x), r.num(v)});
        pl.document["peak_index"] = std::to_string(curve.peak_index);
        pl.document["peak_at_zero"] = curve.peak_at_zero;
        pl.document["samples"] = std::move(s);
      }
      finish(r, pl);
    } else if (*verify) {
      Runner r(g, "verify");
      if (g.csv_flag) throw ValidationError("verify has no CSV output");
      r.param("lemma", vf_lemma);
      r.param("trials", std::to_string(vf_trials));
      const LemmaReport rep = run_lemma_suite(vf_lemma, vf_trials, r.seed(), r.ctx(), r.threads());
      Payload pl;
      pl.document["lemma"] = rep.lemma;
      pl.document["trials"] = std::to_string(rep.trials);
      pl.document["failures"] = std::to_string(rep.failures);
      pl.document["worst_margin"] = r.num(rep.worst_margin);
      pl.document["threshold_findings"] = std::to_string(rep.threshold_findings);
      pl.document["notes"] = rep.notes;
      finish(r, pl);
    } else if (*split) {
      Runner r(g, "split");
      const ThetaParams p = parse_alpha(sp_alpha, r.ctx());
      r.param("alpha", sp_alpha);
      r.param("samples", std::to_string(sp_samples));
      const Configuration c = r.load_points(sp_points);
      const FrequencySplit s(c, p, r.ctx());
      std::vector<Real> xs;
      xs.reserve(sp_samples);
      for (size_t i = 0; i < sp_samples; ++i) xs.push_back(r.ctx().ratio(static_cast<long>(i), static_cast<long>(sp_samples)));
      const SplitReconstruction check = check_split(s, c, xs, r.ctx());
      Payload pl;
      const Format f = pick_format(g, Format::json);
      std::vector<std::vector<std::string>> rows;
      for (const auto& x : xs) {
        rows.push_back({r.num(x), r.num(s.A(x)), r.num(s.B(x)), r.num(s.g1().eval_real(x)), r.num(s.g2().eval_real(x)),
                        r.num(s.h(x)), r.num(s.sum(x))});
      }
      if (f == Format::csv) {
        pl.is_csv = true;
        pl.csv_header = "x,A,B,g1,g2,h,sum";
        pl.rows = std::move(rows);
      } else {
        json& d = pl.document;
        d["n"] = std::to_string(s.n());
        d["cutoff"] = std::to_string(s.cutoff());
        d["g1_l2"] = r.num(s.g1().l2_norm());
        d["g2_l2"] = r.num(s.g2().l2_norm());
        d["reconstruction"] = {{"max_error", r.num(check.max_error)},
                               {"tolerance", r.num(check.tolerance)},
                               {"holds", check.holds}};
        json samples = json::array();
        for (const auto& row : rows) {
          samples.push_back({{"x", row[0]}, {"A", row[1]}, {"B", row[2]}, {"g1", row[3]}, {"g2", row[4]}, {"h", row[5]},
                             {"sum", row[6]}});
        }
        d["samples"] = std::move(samples);
      }
      finish(r, pl);
    } else if (*decompose_cmd) {
      Runner r(g, "decompose");
      if (g.csv_flag) throw ValidationError("decompose has no CSV output");
      const Configuration c = r.load_points(dc_points);
      PerturbationDecomposition d;
      try {
        d = decompose(c, r.ctx());
      } catch (const GapTooSmall& e) {
        throw ValidationError(std::string("not near equispaced: ") + e.what());
      }
      Payload pl;
      pl.document["n"] = std::to_string(d.n());
      pl.document["shift"] = r.num(d.shift);
      json perm = json::array(), eps = json::array();
      for (auto i : d.permutation) perm.push_back(std::to_string(i));
      for (const auto& e : d.eps) eps.push_back(r.num(e));
      pl.document["permutation"] = std::move(perm);
      pl.document["eps"] = std::move(eps);
      pl.document["residual_norm"] = r.num(d.residual_norm);
      finish(r, pl);
    }

    write_output(g.out_path, text, out);
    if (side) out << *side;
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << one_line(e.what()) << "\n";
    return kExitInternal;
  }
}

}  // namespace thetapolar::cli
