// gaussdist: command-line driver for the optimal-discrimination computations.
//
// Exit codes: 0 success, 1 verification or convergence failure, 2 argument
// error, 3 I/O error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gaussdist/gaussdist.hpp"
#include "table.hpp"

namespace gd = gaussdist;
using gd::cli::Cell;
using gd::cli::Json;
using gd::cli::Record;
using gd::cli::Table;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;
constexpr int default_max_modes = 16;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::string command_line;
  unsigned threads = 1;
};

// GAUSSDIST_THREADS sets the worker limit; unset, it is the hardware count.
unsigned thread_budget() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("GAUSSDIST_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw usage_error("GAUSSDIST_THREADS must be a positive integer");
  return static_cast<unsigned>(std::min<long>(v, 256));
}

struct OutputOptions {
  std::string format = "csv";
  std::string out;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
}

Json metadata(const Context& ctx, std::uint64_t seed) {
  Json m = Json::object();
  m["version"] = gd::version;
  m["seed"] = seed;
  m["command_line"] = ctx.command_line;
  return m;
}

// Writes the rendered text to --out or stdout.
void emit(const OutputOptions& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw io_error("cannot open '" + o.out + "' for writing");
  file << text;
  file.close();
  if (!file) throw io_error("failed writing '" + o.out + "'");
}

void emit_table(const Context& ctx, const OutputOptions& o, std::uint64_t seed, const Table& t) {
  std::ostringstream text;
  if (o.format == "json") {
    Json doc = Json::object();
    doc["metadata"] = metadata(ctx, seed);
    doc["rows"] = t.to_json();
    text << doc.dump(2) << '\n';
  } else {
    t.write_csv(text);
  }
  emit(o, text.str());
}

void emit_record(const Context& ctx, const OutputOptions& o, std::uint64_t seed, const Record& r) {
  std::ostringstream text;
  if (o.format == "json") {
    Json doc = Json::object();
    doc["metadata"] = metadata(ctx, seed);
    doc["result"] = r.to_json();
    text << doc.dump(2) << '\n';
  } else {
    r.as_table().write_csv(text);
  }
  emit(o, text.str());
}

// Evaluates rows[i] = fn(i) on the thread budget; row order is by index.
std::vector<std::vector<Cell>> parallel_rows(std::size_t n, unsigned threads,
                                             const std::function<std::vector<Cell>(std::size_t)>& fn) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  gd::detail::parallel_for(n, threads, [&](std::size_t i) {
    try {
      rows[i] = fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;

  void validate() const {
    if (steps < 2) throw usage_error("--steps must be >= 2");
    if (!(start < stop)) throw usage_error("--start must be < --stop");
  }
  double at(std::size_t k) const {
    if (k + 1 == static_cast<std::size_t>(steps)) return stop;
    return start + (stop - start) * static_cast<double>(k) / (steps - 1);
  }
};

void require_energy(double e) {
  if (!(e > 0.0) || !std::isfinite(e)) throw usage_error("--energy must be a finite number > 0");
}

void require_modes(int modes, bool allow_large) {
  if (modes < 1) throw usage_error("--modes must be >= 1");
  if (modes > default_max_modes && !allow_large) {
    throw usage_error("--modes above " + std::to_string(default_max_modes) +
                      " requires --allow-large-modes");
  }
}

// ---------------------------------------------------------------------------

void add_vector(Record& r, const std::string& name, const gd::Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) r.add(name + "[" + std::to_string(i) + "]", v(i));
}

void add_matrix(Record& r, const std::string& name, const gd::Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r.add(name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", m(i, j));
    }
  }
}

Record optimal_record(double energy, int modes, std::uint64_t seed, unsigned threads) {
  Record r;
  r.add("energy_per_mode", energy);
  r.add("modes", static_cast<long long>(modes));
  const double total = modes * energy;
  const auto single = gd::optimal_pair(total);
  r.add("d_c", single.d_c);
  r.add("r", single.r);

  const auto pair = gd::allin_pair(modes, energy);
  add_vector(r, "mean1", pair.first.mean());
  add_vector(r, "mean2", pair.second.mean());
  add_matrix(r, "cov", pair.first.cov());

  const double closed = gd::multimode_optimal_fidelity(modes, energy);
  const auto disc = gd::DiscriminationResult::from_fidelity(closed);
  r.add("fidelity", disc.fidelity);
  r.add("trace_distance", disc.trace_distance);
  r.add("p_err", disc.p_err);
  r.add("closed_form_fidelity", closed);
  r.add("pair_fidelity", gd::pure_fidelity(pair.first, pair.second));

  if (modes == 1) {
    gd::MinimizeConfig config;
    config.threads = threads;
    const auto num = gd::numeric_minimize(energy, seed, config);
    r.add("numeric_fidelity", num.fidelity);
    r.add("numeric_relative_discrepancy", num.relative_error);
    r.add("numeric_gradient_norm", num.gradient_norm);
    r.add("numeric_converged_starts", static_cast<long long>(num.converged_starts));
    r.add("numeric_starts", static_cast<long long>(num.starts));
  } else {
    const auto spec = gd::spectrum_minimize(modes, energy);
    r.add("numeric_fidelity", spec.numeric_fidelity);
    r.add("numeric_relative_discrepancy", std::abs(spec.numeric_fidelity - closed) / closed);
    for (std::size_t j = 0; j < spec.numeric_lambdas.size(); ++j) {
      r.add("numeric_lambda[" + std::to_string(j) + "]", spec.numeric_lambdas[j]);
    }
    const auto sep = gd::separable_product_min(modes, energy);
    r.add("separable_symmetric_fidelity", sep.symmetric);
    r.add("separable_general_fidelity", sep.general);
  }
  return r;
}

std::vector<Cell> polar_row(double energy, double theta) {
  const auto p = gd::polar_curves(energy, theta);
  auto cell = [](const std::optional<double>& r) { return r ? Cell(*r) : Cell(std::monostate{}); };
  return {theta, cell(p.r1), cell(p.r2), p.r2.has_value()};
}

Table intersections_table(const gd::PolarSolveReport& rep) {
  Table t{{"intersection", "theta", "R", "d1", "d2", "residual", "quartic_residual_12",
           "quartic_residual_21", "quartic_scale", "feasible", "kind"},
          {}};
  long long k = 0;
  for (const auto& x : rep.intersections) {
    t.rows.push_back({++k, x.theta, x.radius, x.d1, x.d2, x.residual, x.quartic_residual_12,
                      x.quartic_residual_21, x.quartic_scale, x.feasible,
                      std::string(gd::to_string(x.kind))});
  }
  return t;
}

// Interior nodes k pi / (2 points), k = 1..points-1 (pi/4 among them for even
// points), plus the fold angle at which R2 becomes defined.
std::vector<double> polar_angles(double energy, int points) {
  std::vector<double> angles;
  for (int k = 1; k < points; ++k) angles.push_back(0.5 * std::numbers::pi * k / points);
  angles.push_back(gd::polar_fold_angle(energy));
  std::sort(angles.begin(), angles.end());
  return angles;
}

Table scaling_table(const Range& range, unsigned threads) {
  Table t{{"E", "neg_log_F_coherent", "neg_log_F_centered", "neg_log_F_optimal",
           "neg_log_perr_optimal"},
          {}};
  t.rows = parallel_rows(static_cast<std::size_t>(range.steps), threads, [&](std::size_t k) {
    const double e = range.at(k);
    const double root = std::sqrt(e);
    const double coherent = gd::pure_fidelity(gd::state_from_params({{-root, 0.0}, 0.0, 0.0}),
                                              gd::state_from_params({{root, 0.0}, 0.0, 0.0}));
    const double centered = gd::centered_minimum(e).fidelity;
    const auto opt = gd::optimal_pair(e);
    return std::vector<Cell>{e, -std::log(coherent), -std::log(centered), -std::log(opt.fidelity),
                             -std::log(opt.p_err)};
  });
  return t;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  Context ctx;
  ctx.command_line = "gaussdist";
  for (int i = 1; i < argc; ++i) ctx.command_line += std::string(" ") + argv[i];

  CLI::App app{"Optimal discrimination of isoenergetic pure Gaussian states", "gaussdist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(gd::version));

  // optimal
  double opt_energy = 0.0;
  int opt_modes = 1;
  std::uint64_t opt_seed = 0;
  bool opt_large = false;
  OutputOptions opt_out;
  auto* optimal = app.add_subcommand("optimal", "Optimal pair, fidelity and error probability");
  optimal->add_option("--energy", opt_energy, "Mean photon number per mode (> 0)")->required();
  optimal->add_option("--modes", opt_modes, "Number of modes")->capture_default_str();
  optimal->add_option("--seed", opt_seed, "Seed for the numerical minimizer")->capture_default_str();
  optimal->add_flag("--allow-large-modes", opt_large, "Permit more than 16 modes");
  add_output_options(optimal, opt_out);

  // polar
  double pol_energy = 0.0;
  int pol_points = 2048;
  OutputOptions pol_out;
  auto* polar = app.add_subcommand("polar", "Polar curves R1, R2 and their intersections");
  polar->add_option("--energy", pol_energy, "Energy (> 0)")->required();
  polar->add_option("--points", pol_points, "Number of data rows")->capture_default_str();
  add_output_options(polar, pol_out);

  // scaling
  Range sc_range{0.05, 10.0, 100};
  OutputOptions sc_out;
  auto* scaling = app.add_subcommand("scaling", "-log fidelity of the coherent, centered and optimal pairs");
  scaling->add_option("--start", sc_range.start, "First energy (> 0)")->capture_default_str();
  scaling->add_option("--stop", sc_range.stop, "Last energy")->capture_default_str();
  scaling->add_option("--steps", sc_range.steps, "Number of rows (>= 2)")->capture_default_str();
  add_output_options(scaling, sc_out);

  // sweep
  std::string sw_quantity;
  Range sw_range{0.05, 5.0, 50};
  double sw_energy = 0.5;
  int sw_modes = 2;
  bool sw_large = false;
  std::uint64_t sw_seed = 0;
  OutputOptions sw_out;
  auto* sweep = app.add_subcommand("sweep", "Tabulate a quantity over a range of the swept variable");
  sweep->add_option("--quantity", sw_quantity, "Quantity to tabulate")
      ->required()
      ->check(CLI::IsMember(
          {"optimal-fidelity", "polar-curves", "scaling-compare", "multimode", "oracle-check"}));
  sweep->add_option("--start", sw_range.start, "Range start")->capture_default_str();
  sweep->add_option("--stop", sw_range.stop, "Range stop")->capture_default_str();
  sweep->add_option("--steps", sw_range.steps, "Number of rows (>= 2)")->capture_default_str();
  sweep->add_option("--energy", sw_energy, "Energy for polar-curves")->capture_default_str();
  sweep->add_option("--modes", sw_modes, "Modes for multimode")->capture_default_str();
  sweep->add_flag("--allow-large-modes", sw_large, "Permit more than 16 modes");
  sweep->add_option("--seed", sw_seed, "Seed for oracle-check")->capture_default_str();
  add_output_options(sweep, sw_out);

  // verify
  std::string ver_level = "fast";
  std::uint64_t ver_seed = 0;
  bool ver_fault = false;
  std::string ver_format = "text";
  auto* verify = app.add_subcommand("verify", "Run the self-check suite");
  verify->add_option("--level", ver_level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  verify->add_option("--seed", ver_seed, "Seed for random samples")->capture_default_str();
  verify->add_option("--format", ver_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  verify->add_flag("--inject-fault", ver_fault, "Perturb the reference closed form")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    ctx.threads = thread_budget();

    if (active == optimal) {
      require_energy(opt_energy);
      require_modes(opt_modes, opt_large);
      emit_record(ctx, opt_out, opt_seed, optimal_record(opt_energy, opt_modes, opt_seed, ctx.threads));
    } else if (active == polar) {
      require_energy(pol_energy);
      if (pol_points < 2) throw usage_error("--points must be >= 2");
      Table data{{"theta", "R1", "R2", "defined2"}, {}};
      const auto angles = polar_angles(pol_energy, pol_points);
      data.rows = parallel_rows(angles.size(), ctx.threads,
                                [&](std::size_t k) { return polar_row(pol_energy, angles[k]); });
      const auto rep = gd::find_intersections(pol_energy);
      const auto cuts = intersections_table(rep);
      std::ostringstream text;
      if (pol_out.format == "json") {
        Json doc = Json::object();
        doc["metadata"] = metadata(ctx, 0);
        doc["energy"] = pol_energy;
        doc["fold_angle"] = rep.fold_angle;
        doc["rows"] = data.to_json();
        doc["intersections"] = cuts.to_json();
        text << doc.dump(2) << '\n';
      } else {
        data.write_csv(text);
        text << '\n';
        cuts.write_csv(text);
      }
      emit(pol_out, text.str());
    } else if (active == scaling) {
      sc_range.validate();
      if (!(sc_range.start > 0.0)) throw usage_error("--start must be > 0");
      emit_table(ctx, sc_out, 0, scaling_table(sc_range, ctx.threads));
    } else if (active == sweep) {
      sw_range.validate();
      Table t;
      const auto n = static_cast<std::size_t>(sw_range.steps);
      if (sw_quantity == "polar-curves") {
        require_energy(sw_energy);
        if (!(sw_range.start > 0.0 && sw_range.stop < 0.5 * std::numbers::pi)) {
          throw usage_error("polar-curves range must lie in (0, pi/2)");
        }
        t.header = {"theta", "R1", "R2", "defined2"};
        t.rows = parallel_rows(n, ctx.threads,
                               [&](std::size_t k) { return polar_row(sw_energy, sw_range.at(k)); });
      } else {
        if (!(sw_range.start > 0.0)) throw usage_error("--start must be > 0");
        if (sw_quantity == "optimal-fidelity") {
          t.header = {"E", "d_c", "r", "fidelity", "trace_distance", "p_err"};
          t.rows = parallel_rows(n, ctx.threads, [&](std::size_t k) {
            const auto p = gd::optimal_pair(sw_range.at(k));
            const auto d = gd::DiscriminationResult::from_fidelity(p.fidelity);
            return std::vector<Cell>{p.energy, p.d_c, p.r, d.fidelity, d.trace_distance, d.p_err};
          });
        } else if (sw_quantity == "scaling-compare") {
          t = scaling_table(sw_range, ctx.threads);
        } else if (sw_quantity == "multimode") {
          require_modes(sw_modes, sw_large);
          t.header = {"M", "E", "fidelity", "numeric_fidelity", "allin_pair_fidelity",
                      "separable_symmetric", "separable_general"};
          t.rows = parallel_rows(n, ctx.threads, [&](std::size_t k) {
            const double e = sw_range.at(k);
            const auto o = gd::spectrum_minimize(sw_modes, e);
            const auto s = gd::separable_product_min(sw_modes, e);
            return std::vector<Cell>{static_cast<long long>(sw_modes), e, o.fidelity,
                                     o.numeric_fidelity, o.pair_fidelity, s.symmetric, s.general};
          });
        } else {  // oracle-check
          t.header = {"E", "cutoff", "optimal_oracle", "optimal_closed_form", "random_oracle",
                      "random_closed_form", "max_abs_error"};
          t.rows = parallel_rows(n, ctx.threads, [&](std::size_t k) {
            const double e = sw_range.at(k);
            // Row-local generator: rows do not depend on evaluation order.
            std::mt19937_64 rng(sw_seed + 0x9e3779b97f4a7c15ULL * (k + 1));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            auto random_at_energy = [&] {
              const double f = unit(rng);
              return gd::PureStateParams{
                  std::polar(std::sqrt(e * f), 2.0 * std::numbers::pi * unit(rng)),
                  std::asinh(std::sqrt(e * (1.0 - f))), 2.0 * std::numbers::pi * unit(rng)};
            };
            const auto opt = gd::optimal_pair(e);
            const auto [o1, o2] = gd::build_pair(opt.state1, opt.state2);
            const double opt_oracle = std::norm(gd::overlap(o1, o2));
            const auto a = random_at_energy(), b = random_at_energy();
            const auto [v1, v2] = gd::build_pair(a, b);
            const double rnd_oracle = std::norm(gd::overlap(v1, v2));
            const double rnd_closed =
                gd::pure_fidelity(gd::state_from_params(a), gd::state_from_params(b));
            return std::vector<Cell>{
                e, static_cast<long long>(std::max(o1.cutoff, v1.cutoff)), opt_oracle, opt.fidelity,
                rnd_oracle, rnd_closed,
                std::max(std::abs(opt_oracle - opt.fidelity), std::abs(rnd_oracle - rnd_closed))};
          });
        }
      }
      emit_table(ctx, sw_out, sw_seed, t);
    } else if (active == verify) {
      gd::VerifyHooks hooks;
      hooks.threads = ctx.threads;
      if (ver_fault) {
        hooks.closed_form = [](double e) { return 1.01 * gd::optimal_fidelity(e); };
      }
      const auto level = ver_level == "full" ? gd::VerifyLevel::full : gd::VerifyLevel::fast;
      const auto report = gd::run_verification(level, ver_seed, hooks);
      if (ver_format == "json") {
        Json doc = Json::object();
        doc["metadata"] = metadata(ctx, ver_seed);
        doc["level"] = ver_level;
        doc["samples"] = report.samples;
        doc["energies"] = report.energies;
        Json checks = Json::array();
        for (const auto& c : report.checks) {
          Json j = Json::object();
          j["name"] = c.name;
          j["passed"] = c.passed;
          j["measured"] = c.measured;
          j["tolerance"] = c.tolerance;
          j["detail"] = c.detail;
          checks.push_back(std::move(j));
        }
        doc["checks"] = std::move(checks);
        doc["passed"] = report.passed();
        std::cout << doc.dump(2) << '\n';
      } else {
        for (const auto& c : report.checks) std::cout << gd::format_check(c) << '\n';
        int failed = 0;
        for (const auto& c : report.checks) failed += c.passed ? 0 : 1;
        std::cout << (report.passed() ? "verify: all " : "verify: ")
                  << (report.passed() ? std::to_string(report.checks.size()) + " checks passed"
                                      : std::to_string(failed) + " of " +
                                            std::to_string(report.checks.size()) + " checks failed")
                  << " (level=" << ver_level << ", seed=" << ver_seed << ")\n";
      }
      if (!report.passed()) {
        for (const auto& c : report.checks) {
          if (!c.passed) std::cerr << "failed check: " << c.name << '\n';
        }
        return exit_failed;
      }
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return exit_usage;
  } catch (const gd::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return exit_usage;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const gd::convergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& line : e.trace()) std::cerr << "  " << line << '\n';
    return exit_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failed;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
