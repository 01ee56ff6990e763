#include "dsw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dsw/crossval.hpp"
#include "dsw/errors.hpp"
#include "dsw/hodograph.hpp"
#include "dsw/io.hpp"
#include "dsw/onephase.hpp"
#include "dsw/pde.hpp"
#include "dsw/riemann.hpp"
#include "dsw/specfun.hpp"
#include "json.hpp"

namespace dsw::cli {

namespace {

using nlohmann::json;
constexpr double kPi = 3.14159265358979323846;

HydroState parse_state(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos)
    throw DomainError("expected RHO,NU but got '" + s + "'");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

struct XRange {
  double a = 0.0, b = 1.0;
  int n = 100;
};

XRange parse_range(const std::string& s) {
  XRange r;
  std::stringstream ss(s);
  std::string tok;
  if (!std::getline(ss, tok, ':')) throw DomainError("bad range: " + s);
  r.a = std::stod(tok);
  if (!std::getline(ss, tok, ':')) throw DomainError("bad range: " + s);
  r.b = std::stod(tok);
  if (!std::getline(ss, tok, ':')) throw DomainError("bad range: " + s);
  r.n = std::stoi(tok);
  if (r.n < 2 || r.b <= r.a) throw DomainError("bad range: " + s);
  return r;
}

int thread_cap() {
  unsigned hc = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DSW_LAB_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hc = std::min<unsigned>(hc, static_cast<unsigned>(cap));
  }
  return static_cast<int>(hc);
}

// parallel_for with preallocated output slots; chunk layout is fixed so
// results don't depend on the thread count
void parallel_for(int n, const std::function<void(int)>& body) {
  int nt = std::min(thread_cap(), std::max(1, n));
  if (nt == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

const char* case_name(CaseLetter c) {
  switch (c) {
    case CaseLetter::A: return "A";
    case CaseLetter::B: return "B";
    case CaseLetter::C: return "C";
    case CaseLetter::D: return "D";
    case CaseLetter::E: return "E";
    default: return "F";
  }
}

const char* kind_name(RegionKind k) {
  switch (k) {
    case RegionKind::Plateau: return "plateau";
    case RegionKind::Rarefaction: return "rarefaction";
    case RegionKind::CnoidalDsw: return "cnoidal_dsw";
    case RegionKind::CnoidalZone: return "cnoidal_zone";
    case RegionKind::ContactDsw: return "contact_dsw";
    default: return "vacuum_fan";
  }
}

json pattern_json(const WavePattern& wp) {
  json j;
  j["case"] = case_name(wp.pcase.letter);
  j["side"] = wp.pcase.side == SideMode::SameSide ? "same_side" : "cross_side";
  j["edge_speeds"] = wp.edge_speeds;
  json regions = json::array();
  for (const auto& r : wp.regions) {
    json jr;
    jr["kind"] = kind_name(r.kind);
    if (std::isfinite(r.z_lo)) jr["z_lo"] = r.z_lo; else jr["z_lo"] = nullptr;
    if (std::isfinite(r.z_hi)) jr["z_hi"] = r.z_hi; else jr["z_hi"] = nullptr;
    jr["l_lo"] = r.l_lo;
    jr["l_hi"] = r.l_hi;
    regions.push_back(jr);
  }
  j["regions"] = regions;
  json plats = json::array();
  for (const auto& p : wp.plateaus) {
    auto up = state_from_invariants(p, Branch::Upper);
    auto lo = state_from_invariants(p, Branch::Lower);
    plats.push_back({{"l_minus", p.l_minus},
                     {"l_plus", p.l_plus},
                     {"rho_upper", up.rho},
                     {"nu_upper", up.nu},
                     {"rho_lower", lo.rho},
                     {"nu_lower", lo.nu}});
  }
  j["plateaus"] = plats;
  json vac = json::array();
  for (const auto& v : wp.vacuum_flags)
    vac.push_back({{"region", v.region},
                   {"mapping", v.mapping == SignBranch::UpperSigns ? "upper" : "lower"},
                   {"at_soliton_edge", v.at_soliton_edge},
                   {"z", v.z}});
  j["vacuum_flags"] = vac;
  return j;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(path);
    if (!out) throw SolverError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
  }
}

int cmd_classify(const HydroState& l, const HydroState& r, const std::string& out) {
  auto wp = build_pattern(StepData::from_states(l, r));
  emit(pattern_json(wp), out);
  return 0;
}

int cmd_profile(const HydroState& l, const HydroState& r, double t, const XRange& xr,
                const std::string& out) {
  if (!(t > 0.0)) throw DomainError("profile: need t > 0");
  auto wp = build_pattern(StepData::from_states(l, r));
  io::Csv csv;
  csv.header = {"x",         "rho_upper",    "nu_upper",    "rho_lower",
                "nu_lower",  "envelope_min", "envelope_max"};
  csv.rows.assign(static_cast<size_t>(xr.n), {});
  parallel_for(xr.n, [&](int i) {
    double x = xr.a + (xr.b - xr.a) * i / (xr.n - 1);
    auto ps = sample_pattern(wp, x, t);
    csv.rows[static_cast<size_t>(i)] = {x,
                                        ps.upper.rho,
                                        ps.upper.nu,
                                        ps.lower.rho,
                                        ps.lower.nu,
                                        ps.env_min,
                                        ps.env_max};
  });
  csv.write(out.empty() ? "profile.csv" : out);
  return 0;
}

void write_snapshot_csv(const pde::FieldState& fs, const std::string& path) {
  io::Csv csv;
  csv.header = {"x", "re_u", "im_u", "rho", "nu"};
  auto ob = pde::measure(fs);
  for (int i = 0; i < fs.grid.n; ++i) {
    size_t si = static_cast<size_t>(i);
    csv.add_row({fs.grid.node(i), fs.u[si].real(), fs.u[si].imag(), ob.rho[si], ob.nu[si]});
  }
  csv.write(path);
}

int cmd_simulate(const HydroState& l, const HydroState& r, double t, int n, double length,
                 double width, double dt, const std::string& snaps, const std::string& prefix) {
  pde::Grid g{n, length};
  auto sd = StepData::from_states(l, r);
  auto fs = pde::init_from_step(g, sd, width);
  double m0 = pde::total_mass(fs);

  pde::SolverConfig cfg;
  cfg.dt = dt;
  if (!snaps.empty()) {
    std::stringstream ss(snaps);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.snapshot_times.push_back(std::stod(tok));
  }
  std::string pre = prefix.empty() ? "simulate" : prefix;
  pde::evolve(fs, t, cfg, [&](const pde::FieldState& snap) {
    std::ostringstream name;
    name << pre << "_t" << snap.time << ".csv";
    write_snapshot_csv(snap, name.str());
  });
  write_snapshot_csv(fs, pre + "_final.csv");

  json rep;
  rep["mass_initial"] = m0;
  rep["mass_final"] = pde::total_mass(fs);
  rep["mass_drift_rel"] = std::fabs(pde::total_mass(fs) - m0) / m0;
  rep["time"] = fs.time;
  rep["n_points"] = n;
  rep["length"] = length;
  rep["smoothing_width"] = width;
  emit(rep, pre + "_report.json");
  return 0;
}

int cmd_compare(const HydroState& l, const HydroState& r, double t, int n, double length,
                double width, const std::string& out) {
  pde::Grid g{n, length};
  auto rep = crossval::compare_step(StepData::from_states(l, r), t, g, width);
  json j;
  j["time"] = rep.time;
  j["mass_drift_rel"] = rep.mass_drift_rel;
  json edges = json::array();
  for (const auto& e : rep.edges)
    edges.push_back({{"name", e.name},
                     {"predicted", e.predicted},
                     {"measured", e.measured},
                     {"rel_error", e.rel_error}});
  j["edges"] = edges;
  json plats = json::array();
  for (const auto& p : rep.plateaus)
    plats.push_back({{"name", p.name},
                     {"predicted", p.predicted},
                     {"measured", p.measured},
                     {"rel_error", p.rel_error}});
  j["plateaus"] = plats;
  emit(j, out);
  return 0;
}

int cmd_cubic(double lminus, double lplus, double t, int nsamp, const std::string& out,
              const std::string& report_out) {
  CubicBreakData d{lminus, lplus};
  auto e = edge_laws(t, d);
  json rep;
  rep["x_left"] = e.xL;
  rep["x_right"] = e.xR;
  rep["l4_soliton"] = e.l4_soliton;

  io::Csv csv;
  csv.header = {"x", "l3", "l4", "rho"};
  if (t > 0.0) {
    // march across the fan accumulating the oscillation phase from the
    // soliton edge, then reconstruct the density on the low band
    std::vector<ModulationState> states(static_cast<size_t>(nsamp));
    std::vector<double> xs(static_cast<size_t>(nsamp));
    for (int i = 0; i < nsamp; ++i) {
      xs[static_cast<size_t>(i)] = e.xL + (e.xR - e.xL) * i / (nsamp - 1);
      states[static_cast<size_t>(i)] = solve_cubic_modulation(xs[static_cast<size_t>(i)], t, d);
    }
    std::vector<double> cycles(static_cast<size_t>(nsamp), 0.0);
    for (int i = nsamp - 2; i >= 0; --i) {
      auto len = [&](int k) {
        auto mw = modulus_and_wavelength(states[static_cast<size_t>(k)]);
        return std::isfinite(mw.L) ? 1.0 / mw.L : 0.0;
      };
      cycles[static_cast<size_t>(i)] =
          cycles[static_cast<size_t>(i) + 1] -
          0.5 * (len(i) + len(i + 1)) * (xs[static_cast<size_t>(i) + 1] - xs[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < nsamp; ++i) {
      const auto& ms = states[static_cast<size_t>(i)];
      auto wpar = wave_params(ms);
      auto mw = modulus_and_wavelength(ms);
      double frac = cycles[static_cast<size_t>(i)] - std::floor(cycles[static_cast<size_t>(i)]);
      double xi = std::isfinite(mw.L) ? frac * mw.L : 0.0;
      double rho = density_profile(xi, wpar, mw.m, OscInterval::Low);
      csv.add_row({xs[static_cast<size_t>(i)], ms.l[2], ms.l[3], rho});
    }
  }
  csv.write(out.empty() ? "cubic.csv" : out);
  emit(rep, report_out);
  return 0;
}

int cmd_dispersion(double k, double amp, const std::string& out) {
  double L = 16.0 * kPi;
  pde::Grid g{512, L};
  double dk = 2.0 * kPi / L;
  int mode = std::max(1, static_cast<int>(std::lround(k / dk)));
  double k_used = mode * dk;

  pde::FieldState fs{g, std::vector<std::complex<double>>(static_cast<size_t>(g.n)), 0.0};
  for (int i = 0; i < g.n; ++i)
    fs.u[static_cast<size_t>(i)] = std::polar(std::max(amp, 1e-8), k_used * g.node(i));

  double om_pred = -k_used * k_used * k_used - 3.0 * amp * amp * k_used * k_used -
                   0.75 * amp * amp * amp * amp * k_used;
  double T = 0.5;
  int n_meas = static_cast<int>(std::ceil(std::fabs(om_pred) * T / 2.0)) + 4;

  auto phase_of = [&](const pde::FieldState& f) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < f.grid.n; ++i)
      acc += f.u[static_cast<size_t>(i)] * std::polar(1.0, -2.0 * kPi * mode * i / f.grid.n);
    return std::arg(acc);
  };
  double prev = phase_of(fs), total = 0.0;
  pde::SolverConfig cfg;
  for (int s = 0; s < n_meas; ++s) {
    pde::evolve(fs, T / n_meas, cfg);
    double ph = phase_of(fs);
    double dph = ph - prev;
    while (dph > kPi) dph -= 2.0 * kPi;
    while (dph < -kPi) dph += 2.0 * kPi;
    total += dph;
    prev = ph;
  }
  double om_meas = -total / T;

  json j;
  j["k_used"] = k_used;
  j["amplitude"] = amp;
  j["omega_measured"] = om_meas;
  j["omega_analytic"] = om_pred;
  j["rel_error"] = std::fabs(om_meas - om_pred) / std::max(1e-300, std::fabs(om_pred));
  emit(j, out);
  return 0;
}

int cmd_plot(const std::string& in, const std::string& out, int xcol, const std::string& ycols) {
  auto csv = io::read_csv(in);
  std::vector<size_t> ys;
  if (ycols.empty()) {
    for (size_t c = 0; c < csv.header.size(); ++c)
      if (c != static_cast<size_t>(xcol)) ys.push_back(c);
  } else {
    std::stringstream ss(ycols);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto it = std::find(csv.header.begin(), csv.header.end(), tok);
      if (it != csv.header.end()) {
        ys.push_back(static_cast<size_t>(it - csv.header.begin()));
      } else {
        ys.push_back(static_cast<size_t>(std::stoul(tok)));
      }
    }
  }
  io::write_svg_plot(out, csv, static_cast<size_t>(xcol), ys);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<std::string> owned = args;
  std::vector<char*> argv;
  std::string prog = "dswlab";
  argv.push_back(prog.data());
  for (auto& a : owned) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  CLI::App app{"Riemann problems, modulated wave patterns and direct simulation "
               "for a higher-order nonlinear dispersive wave equation"};
  app.require_subcommand(1);

  std::string left_s, right_s, out, snaps, ycols, in_csv;
  double t = 1.0, width = 0.5, dt = 0.0;
  double lminus = 0.0, lplus = 1.0, kflag = 1.0, amp = 1.0;
  int n = 4096, nsamp = 400, xcol = 0;
  std::string xrange_s = "-100:10:1000";
  std::string report_out;
  double length = 400.0;

  auto* classify_cmd = app.add_subcommand("classify", "classify step data into a wave pattern");
  classify_cmd->add_option("--left", left_s, "left state RHO,NU")->required();
  classify_cmd->add_option("--right", right_s, "right state RHO,NU")->required();
  classify_cmd->add_option("--out", out, "output JSON path (default stdout)");

  auto* profile_cmd = app.add_subcommand("profile", "sample the modulated pattern at time t");
  profile_cmd->add_option("--left", left_s)->required();
  profile_cmd->add_option("--right", right_s)->required();
  profile_cmd->add_option("--t", t, "sample time")->required();
  profile_cmd->add_option("--x", xrange_s, "sample range A:B:N");
  profile_cmd->add_option("--out", out, "output CSV path");

  auto* sim_cmd = app.add_subcommand("simulate", "direct pseudospectral run from step data");
  sim_cmd->add_option("--left", left_s)->required();
  sim_cmd->add_option("--right", right_s)->required();
  sim_cmd->add_option("--t", t, "final time")->required();
  sim_cmd->add_option("--n", n, "grid points (power of two)");
  sim_cmd->add_option("--length", length, "domain length");
  sim_cmd->add_option("--width", width, "step smoothing width");
  sim_cmd->add_option("--dt", dt, "time step (0 = auto)");
  sim_cmd->add_option("--snapshots", snaps, "comma-separated snapshot times");
  sim_cmd->add_option("--out", out, "output prefix");

  auto* cmp_cmd = app.add_subcommand("compare", "analytic pattern vs direct simulation");
  cmp_cmd->add_option("--left", left_s)->required();
  cmp_cmd->add_option("--right", right_s)->required();
  cmp_cmd->add_option("--t", t, "comparison time")->required();
  cmp_cmd->add_option("--n", n, "grid points");
  cmp_cmd->add_option("--length", length, "domain length");
  cmp_cmd->add_option("--width", width, "step smoothing width");
  cmp_cmd->add_option("--out", out, "output JSON path (default stdout)");

  auto* cubic_cmd = app.add_subcommand("cubic", "cubic-breaking fan and edge laws");
  cubic_cmd->add_option("--lminus", lminus, "background lower invariant")->required();
  cubic_cmd->add_option("--lplus", lplus, "upper invariant at breaking")->required();
  cubic_cmd->add_option("--t", t, "time")->required();
  cubic_cmd->add_option("--nsamp", nsamp, "fan samples");
  cubic_cmd->add_option("--out", out, "fan CSV path");
  cubic_cmd->add_option("--report", report_out, "edge-law JSON path (default stdout)");

  auto* disp_cmd = app.add_subcommand("dispersion-test", "plane-wave frequency check");
  disp_cmd->add_option("--k", kflag, "wavenumber")->required();
  disp_cmd->add_option("--amp", amp, "amplitude")->required();
  disp_cmd->add_option("--out", out, "output JSON path (default stdout)");

  auto* plot_cmd = app.add_subcommand("plot", "render CSV columns to an SVG line plot");
  plot_cmd->add_option("csv", in_csv, "input CSV")->required();
  plot_cmd->add_option("--out", out, "output SVG path")->required();
  plot_cmd->add_option("--x", xcol, "x column index");
  plot_cmd->add_option("--y", ycols, "y columns (names or indices, comma-separated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed())
      return cmd_classify(parse_state(left_s), parse_state(right_s), out);
    if (profile_cmd->parsed())
      return cmd_profile(parse_state(left_s), parse_state(right_s), t, parse_range(xrange_s),
                         out);
    if (sim_cmd->parsed())
      return cmd_simulate(parse_state(left_s), parse_state(right_s), t, n, length, width, dt,
                          snaps, out);
    if (cmp_cmd->parsed())
      return cmd_compare(parse_state(left_s), parse_state(right_s), t, n, length, width, out);
    if (cubic_cmd->parsed()) return cmd_cubic(lminus, lplus, t, nsamp, out, report_out);
    if (disp_cmd->parsed()) return cmd_dispersion(kflag, amp, out);
    if (plot_cmd->parsed()) return cmd_plot(in_csv, out, xcol, ycols);
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const OutOfRegionError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace dsw::cli
