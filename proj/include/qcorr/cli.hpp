#pragma once

// The `qcorr` command line: state | sweep | figure | selftest.
//
// Exit codes: 0 success, 1 internal or selftest failure, 2 invalid input.

#include <qcorr/measures.hpp>
#include <qcorr/oracles.hpp>
#include <qcorr/ortho_states.hpp>
#include <qcorr/selftest.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#ifndef QCORR_VERSION
#define QCORR_VERSION "0.0.0"
#endif

namespace qcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Inputs closer than this to the positivity region are moved onto its
/// boundary, so that 6-digit decimal input of boundary states is accepted.
inline constexpr double kInputSnapTol = 1e-5;

class UsageError : public Error {
public:
  using Error::Error;
};

struct SweepSpec {
  int n = 3;
  int grid = 21;
  double f_lo = -1.0, f_hi = 1.0;
  double fhat_lo = 0.0, fhat_hi = 3.0;
  bool oracle = false;
  std::string out;
  std::uint64_t seed = 20240601;
  int restarts = 64;
};

/// %.12g
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline OptimizerConfig oracle_config(std::uint64_t seed, int restarts) {
  OptimizerConfig cfg;
  cfg.rng_seed = seed;
  cfg.seeds = restarts;
  return cfg;
}

/// Configuration for the maximum-discord scan behind the scaled discord; the
/// scan evaluates dozens of states, so it uses at most 8 restarts each.
inline OptimizerConfig dg_max_config(std::uint64_t seed, int restarts) {
  OptimizerConfig cfg = oracle_config(seed, restarts);
  cfg.seeds = std::min(restarts, 8);
  return cfg;
}

/// Grid node i of n over [lo, hi], with round-off near zero removed.
inline double grid_node(double lo, double hi, int i, int n) {
  const double v = lo + (hi - lo) * i / (n - 1);
  return std::abs(v) < 1e-15 ? 0.0 : v;
}

struct OracleColumns {
  double lqu = 0, gd = 0, min = 0;
};

inline OracleColumns run_oracles(const OrthoState& s, const OptimizerConfig& cfg) {
  const ComplexMatrix rho = density_matrix(s);
  const Dims dims{s.n(), s.n()};
  return {oracle_lqu(rho, fixed_spectrum(s.n()), cfg).value, oracle_gd(rho, dims, cfg).value,
          oracle_min(rho, dims, cfg).value};
}

inline const char* report_header() {
  return "n,f,fhat,a,b,c,lqu,dg_lower,min_upper,dg_normalized_lower,min_normalized_upper,"
         "scaled_discord_lower,scaled_discord_upper,negativity,physical,npt";
}

inline std::string report_row(const MeasureReport& r) {
  std::string row = std::to_string(r.n);
  for (double v : {r.f, r.fhat, r.a, r.b, r.c, r.lqu, r.dg_lower, r.min_upper, r.dg_normalized_lower,
                   r.min_normalized_upper, r.scaled_discord_lower, r.scaled_discord_upper, r.negativity})
    row += "," + fmt(v);
  row += r.physical ? ",1" : ",0";
  row += r.npt ? ",1" : ",0";
  return row;
}

inline void write_metadata(std::ostream& os, const std::string& command, std::uint64_t seed,
                           const std::string& spec) {
  os << "# qcorr " << QCORR_VERSION << "\n";
  os << "# command: " << command << "\n";
  os << "# seed: " << seed << "\n";
  os << "# spec: " << spec << "\n";
}

/// Opens `path` for writing, or returns nullptr when `path` is empty.
inline std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;
  auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file) throw UsageError("cannot write output file '" + path + "'");
  return file;
}

// ---------------------------------------------------------------------------

struct StateArgs {
  int n = 3;
  std::optional<double> f, fhat, a, b, c;
  bool oracle = false;
  std::string out;
  std::uint64_t seed = 20240601;
  int restarts = 64;
};

/// Resolves the single parametrization given on the command line.
inline OrthoState resolve_state(const StateArgs& args, std::ostream& err) {
  if (args.n < 2) throw UsageError("--n must be >= 2");
  const bool ff = args.f || args.fhat;
  const bool abc = args.a || args.b || args.c;
  if (ff == abc) throw UsageError("give exactly one parametrization: (--f, --fhat) or (--a, --b, --c)");
  const int n = args.n;
  double f = 0, fhat = 0;
  if (ff) {
    if (!args.f || !args.fhat) throw UsageError("--f and --fhat must be given together");
    f = *args.f;
    fhat = *args.fhat;
  } else {
    const double b = args.b.value_or(0.0), c = args.c.value_or(0.0);
    const double a = args.a ? *args.a : (1.0 / n - b - c) / n;
    if (std::abs(n * (n * a + b + c) - 1.0) > kTraceTol)
      throw UsageError("trace condition n(na+b+c) = 1 violated");
    const OrthoState s = OrthoState::from_abc(n, a, b, c);
    f = s.f();
    fhat = s.fhat();
  }
  const PhysicalCheck check = is_physical(n, f, fhat);
  if (check.margin < -kInputSnapTol)
    throw NonPhysicalError("state is not physical: " + check.violated, check.margin, check.violated);
  if (!check.physical || check.margin < 0) {
    const auto p = project_to_physical(n, f, fhat);
    err << "note: (f, fhat) = (" << fmt(f) << ", " << fmt(fhat) << ") moved onto the region boundary ("
        << fmt(p[0]) << ", " << fmt(p[1]) << ")\n";
    f = p[0];
    fhat = p[1];
  }
  return OrthoState::from_ffhat(n, f, fhat);
}

inline int cmd_state(const StateArgs& args, std::ostream& out, std::ostream& err) {
  const OrthoState s = resolve_state(args, err);
  const double dg_max = dg_max_cached(s.n(), dg_max_config(args.seed, args.restarts));
  const MeasureReport r = measure_report(s, dg_max);
  std::optional<OracleColumns> oc;
  if (args.oracle) oc = run_oracles(s, oracle_config(args.seed, args.restarts));

  if (auto file = open_output(args.out)) {
    write_metadata(*file, "state", args.seed, "n=" + std::to_string(s.n()) + " f=" + fmt(s.f()) +
                                                  " fhat=" + fmt(s.fhat()) + " restarts=" +
                                                  std::to_string(args.restarts));
    *file << report_header() << (oc ? ",oracle_lqu,oracle_gd,oracle_min" : "") << "\n";
    *file << report_row(r);
    if (oc) *file << "," << fmt(oc->lqu) << "," << fmt(oc->gd) << "," << fmt(oc->min);
    *file << "\n";
    return kExitOk;
  }
  const auto line = [&](const char* key, const std::string& v) { out << key << " = " << v << "\n"; };
  line("n", std::to_string(r.n));
  line("f", fmt(r.f));
  line("fhat", fmt(r.fhat));
  line("a", fmt(r.a));
  line("b", fmt(r.b));
  line("c", fmt(r.c));
  line("lqu", fmt(r.lqu));
  line("dg_lower", fmt(r.dg_lower));
  line("min_upper", fmt(r.min_upper));
  line("dg_normalized_lower", fmt(r.dg_normalized_lower));
  line("min_normalized_upper", fmt(r.min_normalized_upper));
  line("scaled_discord_lower", fmt(r.scaled_discord_lower));
  line("scaled_discord_upper", fmt(r.scaled_discord_upper));
  line("negativity", fmt(r.negativity));
  line("physical", r.physical ? "true" : "false");
  line("npt", r.npt ? "true" : "false");
  if (oc) {
    line("oracle_lqu", fmt(oc->lqu));
    line("oracle_gd", fmt(oc->gd));
    line("oracle_min", fmt(oc->min));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// One CSV row per physical grid point, row-major with f outer. Points are
/// evaluated on worker threads and written in grid order.
inline int cmd_sweep(const SweepSpec& spec, std::ostream& out) {
  if (spec.n < 2) throw UsageError("--n must be >= 2");
  if (spec.grid < 2) throw UsageError("--grid must be >= 2");
  const int n = spec.n;
  const int total = spec.grid * spec.grid;
  const OptimizerConfig cfg = oracle_config(spec.seed, spec.restarts);
  const double dg_max = dg_max_cached(n, dg_max_config(spec.seed, spec.restarts));

  std::vector<std::optional<std::string>> rows(total);
  const auto work = [&](int begin, int end) {
    for (int idx = begin; idx < end; ++idx) {
      const double f = grid_node(spec.f_lo, spec.f_hi, idx / spec.grid, spec.grid);
      const double fhat = grid_node(spec.fhat_lo, spec.fhat_hi, idx % spec.grid, spec.grid);
      if (!is_physical(n, f, fhat).physical) continue;
      const OrthoState s = OrthoState::from_ffhat(n, f, fhat);
      std::string row = report_row(measure_report(s, dg_max));
      if (spec.oracle) {
        const OracleColumns oc = run_oracles(s, cfg);
        row += "," + fmt(oc.lqu) + "," + fmt(oc.gd) + "," + fmt(oc.min);
      }
      rows[idx] = std::move(row);
    }
  };
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, total);
  {
    std::vector<std::jthread> pool;
    const int chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk, end = std::min(total, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
  }

  auto file = open_output(spec.out);
  std::ostream& os = file ? *file : out;
  write_metadata(os, "sweep", spec.seed,
                 "n=" + std::to_string(n) + " grid=" + std::to_string(spec.grid) + " f=[" + fmt(spec.f_lo) + "," +
                     fmt(spec.f_hi) + "] fhat=[" + fmt(spec.fhat_lo) + "," + fmt(spec.fhat_hi) +
                     "] oracle=" + (spec.oracle ? "1" : "0") + " restarts=" + std::to_string(spec.restarts));
  os << report_header() << (spec.oracle ? ",oracle_lqu,oracle_gd,oracle_min" : "") << "\n";
  int skipped = 0;
  for (const auto& row : rows) {
    if (row)
      os << *row << "\n";
    else
      ++skipped;
  }
  os << "# skipped: " << skipped << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// fig1: LQU branch region over the physical (f, fhat) grid.
/// fig2, fig3: LQU along the two-qutrit Werner and isotropic slices.
/// fig4: discord bounds, scaled discord bounds and squared negativity on the
///       subclass a = 1/9, c = -b.
inline int cmd_figure(const std::string& id, const SweepSpec& spec, std::ostream& out) {
  if (spec.grid < 2) throw UsageError("--grid must be >= 2");
  const int g = spec.grid;
  auto file = open_output(spec.out);
  std::ostream& os = file ? *file : out;
  const std::string meta = "n=" + std::to_string(id == "fig1" ? spec.n : 3) + " grid=" + std::to_string(g);

  if (id == "fig1") {
    if (spec.n < 2) throw UsageError("--n must be >= 2");
    const int n = spec.n;
    write_metadata(os, "figure fig1", spec.seed, meta);
    os << "f,fhat,b1c1,sign_b1c1,branch,lqu\n";
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const double f = grid_node(-1.0, 1.0, i, g);
        const double fhat = grid_node(0.0, n, j, g);
        if (!is_physical(n, f, fhat).physical) continue;
        const OrthoState s = OrthoState::from_ffhat(n, f, fhat);
        const SqrtCoefficients r = sqrt_coeffs(s);
        const double prod = r.b1 * r.c1;
        const int sign = std::abs(prod) < 1e-12 ? 0 : (prod > 0 ? 1 : -1);
        os << fmt(f) << "," << fmt(fhat) << "," << fmt(prod) << "," << sign << "," << lqu_ortho_branch(s) << ","
           << fmt(lqu_ortho(s)) << "\n";
      }
  } else if (id == "fig2" || id == "fig3") {
    const bool wer = id == "fig2";
    const ParameterRange range = wer ? werner_range(3) : isotropic_range(3);
    write_metadata(os, "figure " + id, spec.seed, meta);
    os << (wer ? "b" : "c") << ",lqu\n";
    for (int i = 0; i < g; ++i) {
      const double v = grid_node(range.lo, range.hi, i, g);
      os << fmt(v) << "," << fmt(wer ? lqu_werner(v) : lqu_isotropic(v)) << "\n";
    }
  } else if (id == "fig4") {
    const double dg_max = dg_max_cached(3, dg_max_config(spec.seed, spec.restarts));
    write_metadata(os, "figure fig4", spec.seed, meta + " a=1/9 c=-b restarts=" + std::to_string(spec.restarts));
    os << "b,dg_lower_norm,dg_upper_norm,dt_lower,dt_upper,negativity_sq\n";
    for (int i = 0; i < g; ++i) {
      const double b = grid_node(-1.0 / 9.0, 1.0 / 18.0, i, g);
      const OrthoState s = OrthoState::from_abc(3, 1.0 / 9.0, b, -b);
      const MeasureReport r = measure_report(s, dg_max);
      os << fmt(b) << "," << fmt(r.dg_normalized_lower) << "," << fmt(r.min_normalized_upper) << ","
         << fmt(r.scaled_discord_lower) << "," << fmt(r.scaled_discord_upper) << ","
         << fmt(r.negativity * r.negativity) << "\n";
    }
  } else {
    throw UsageError("unknown figure '" + id + "' (expected fig1, fig2, fig3 or fig4)");
  }
  return kExitOk;
}

inline int cmd_selftest(const OptimizerConfig& cfg, std::ostream& out) {
  bool ok = true;
  for (const IdentityCheck& c : run_identity_suite(cfg)) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << "  (residual " << fmt(c.residual) << ", tol "
        << fmt(c.tolerance) << ")\n";
    ok = ok && c.passed();
  }
  out << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum correlation measures for O(x)O-invariant states", "qcorr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QCORR_VERSION);

  std::uint64_t seed = 20240601;
  int restarts = 64;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed for the optimizers")->envname("QCORR_SEED");
    sub->add_option("--restarts", restarts, "random restarts per optimization")->check(CLI::PositiveNumber);
  };

  StateArgs sa;
  CLI::App* state = app.add_subcommand("state", "all measures for one state");
  state->add_option("--n", sa.n, "subsystem dimension");
  const auto add_opt = [&](const char* name, std::optional<double>& slot, const char* help) {
    state->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, help);
  };
  add_opt("--f", sa.f, "tr(rho F)");
  add_opt("--fhat", sa.fhat, "tr(rho Fhat)");
  add_opt("--a", sa.a, "coefficient of I (default: from trace condition)");
  add_opt("--b", sa.b, "coefficient of F");
  add_opt("--c", sa.c, "coefficient of Fhat");
  state->add_flag("--oracle", sa.oracle, "also run the optimization oracles");
  state->add_option("--out", sa.out, "write a CSV row to this file");
  add_common(state);

  SweepSpec sw;
  CLI::App* sweep = app.add_subcommand("sweep", "measures over an (f, fhat) grid");
  sweep->add_option("--n", sw.n, "subsystem dimension");
  sweep->add_option("--grid", sw.grid, "points per axis")->check(CLI::Range(2, 100000));
  sweep->add_flag("--oracle", sw.oracle, "add oracle columns");
  sweep->add_option("--out", sw.out, "output CSV (default stdout)");
  add_common(sweep);

  SweepSpec fig;
  fig.grid = 100;
  std::string fig_id;
  CLI::App* figure = app.add_subcommand("figure", "figure datasets fig1..fig4");
  figure->add_option("id", fig_id, "fig1 | fig2 | fig3 | fig4")->required();
  figure->add_option("--n", fig.n, "subsystem dimension (fig1)");
  figure->add_option("--grid", fig.grid, "points per axis")->check(CLI::Range(2, 100000));
  figure->add_option("--out", fig.out, "output CSV (default stdout)");
  add_common(figure);

  CLI::App* selftest = app.add_subcommand("selftest", "run the identity suite");
  add_common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*state) {
      sa.seed = seed;
      sa.restarts = restarts;
      return cmd_state(sa, out, err);
    }
    if (*sweep) {
      sw.seed = seed;
      sw.restarts = restarts;
      sw.fhat_hi = sw.n;
      return cmd_sweep(sw, out);
    }
    if (*figure) {
      fig.seed = seed;
      fig.restarts = restarts;
      return cmd_figure(fig_id, fig, out);
    }
    if (*selftest) return cmd_selftest(oracle_config(seed, restarts), out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NonPhysicalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

} // namespace qcorr::cli
