// tpcurve: tangent-point energies, beta numbers, regularity diagnostics and
// fixed-length gradient descent on discretized curves.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "tpcurve/tpcurve.hpp"

namespace fs = std::filesystem;
using namespace tpc;

namespace {

struct GlobalOpts {
  int threads = 0;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool csv_closed = true;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(out_path, text);
  }
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

// scale syntax: start:stop:mode[:count], e.g. 0.5:0.01:geometric:8
std::vector<double> parse_scales(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3) throw std::invalid_argument("scales: expected start:stop:mode[:count]");
  const double start = std::stod(parts[0]);
  const double stop = std::stod(parts[1]);
  const bool geometric = parts[2] == "geometric";
  if (!geometric && parts[2] != "linear")
    throw std::invalid_argument("scales: mode must be 'geometric' or 'linear'");
  const int count = parts.size() > 3 ? std::stoi(parts[3]) : 8;
  if (count < 3) throw std::invalid_argument("scales: count must be >= 3");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double t = double(i) / double(count - 1);
    out.push_back(geometric ? start * std::pow(stop / start, t) : start + t * (stop - start));
  }
  return out;
}

std::string energy_report_json(const EnergyReport& rep) {
  JsonWriter w;
  w.field("value", rep.value)
      .field("q", rep.q)
      .field("m", rep.m)
      .field("exclusion_width", rep.exclusion_width)
      .field("max_integrand", rep.max_integrand)
      .field("length", rep.length)
      .field("flags", rep.flags);
  return w.str();
}

int run_generate(const GlobalOpts&, const std::string& shape,
                 const std::map<std::string, double>& params, const std::string& out,
                 const std::string& plot) {
  ShapeSpec spec{shape_kind_from_string(shape), params};
  const Polyline p = generate(spec);
  if (out.empty()) throw std::invalid_argument("generate: output path required (-o)");
  write_curve_json(out, p);
  if (!plot.empty()) svg_curve(plot, p);
  std::printf("wrote %s (%lld points, %s)\n", out.c_str(),
              static_cast<long long>(p.size()), p.closed ? "closed" : "open");
  return 0;
}

int run_energy(const GlobalOpts& g, const std::string& in, double q, Eigen::Index m,
               Eigen::Index exclude, const std::string& out) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  const auto rep = energy(c, q, exclude);
  emit(energy_report_json(rep), out);
  if (!out.empty()) std::printf("E_%g = %s\n", q, format_g17(rep.value).c_str());
  return 0;
}

int run_refine(const GlobalOpts& g, const std::string& in, double q,
               const std::string& levels_str, Eigen::Index exclude, const std::string& out,
               const std::string& plot) {
  std::vector<Eigen::Index> levels;
  for (double v : parse_list(levels_str)) levels.push_back(static_cast<Eigen::Index>(v));
  const auto res = refine_energy(read_curve(in, g.csv_closed), q, levels, exclude);

  std::vector<double> ms, vals;
  for (const auto& r : res.reports) {
    ms.push_back(double(r.m));
    vals.push_back(r.value);
  }
  if (g.format == "csv") {
    std::string s = "m,value\n";
    for (std::size_t i = 0; i < ms.size(); ++i)
      s += format_g17(ms[i]) + "," + format_g17(vals[i]) + "\n";
    emit(s, out);
  } else {
    JsonWriter w;
    w.field("q", q)
        .field("levels", ms)
        .field("values", vals)
        .field("final_ratio", res.final_ratio)
        .field("classification",
               std::string(res.trend == RefineTrend::diverging ? "diverging" : "converged"));
    emit(w.str(), out);
  }
  if (!plot.empty()) svg_series(plot, ms, vals, "m", "E_q", true);
  return 0;
}

int run_beta(const GlobalOpts& g, const std::string& in, double q, const std::string& scales_str,
             Eigen::Index m, double c0, double c1, const std::string& out_prefix,
             const std::string& plot) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  const auto prof = beta_profile(c, q, parse_scales(scales_str));

  std::string csv = "d,sup_beta\n";
  for (std::size_t i = 0; i < prof.radii.size(); ++i)
    csv += format_g17(prof.radii[i]) + "," + format_g17(prof.sup_beta[i]) + "\n";
  JsonWriter w;
  w.field("q", q)
      .field("kappa", prof.kappa)
      .field("fitted_exponent", prof.fitted_exponent)
      .field("verdict", std::string(prof.pass ? "pass" : "fail"))
      .field("c0", c0)
      .field("c1", c1);

  // empirical minimal passing constants on this curve (q > 2 only): c1 from
  // the beta-decay bound over the profile scales, c0 from the secant-slab
  // inclusion over a deterministic pair sample
  if (q > 2) {
    const double E = energy(c, q).value;
    double c1_min = 0;
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
      c1_min = std::max(c1_min, prof.sup_beta[i] / (std::pow(E, 1.0 / (q + 4)) *
                                                    std::pow(prof.radii[i], prof.kappa)));
    double c0_min = 0;
    for (int k = 0; k < 8; ++k) {
      const Eigen::Index i = k * c.size() / 8;
      const Eigen::Index j = (i + c.size() / 16) % c.size();
      c0_min = std::max(c0_min, static_cast<double>(secant_slab_report(c, i, j, q, E).c0_min));
    }
    w.field("c1_min_passing", c1_min).field("c0_min_passing", c0_min);
  }
  if (out_prefix.empty()) {
    std::fputs(csv.c_str(), stdout);
    std::fputs(w.str().c_str(), stdout);
  } else {
    write_text_file(out_prefix + ".csv", csv);
    write_text_file(out_prefix + ".json", w.str());
  }
  if (!plot.empty()) svg_series(plot, prof.radii, prof.sup_beta, "d", "sup beta", true);
  return 0;
}

int run_hoelder(const GlobalOpts& g, const std::string& in, double q, Eigen::Index m,
                Eigen::Index pairs, double gap_min, double gap_max, const std::string& out) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  const double gmax = gap_max > 0 ? gap_max : c.length / 8;
  const double gmin = gap_min > 0 ? gap_min : std::max(4 * c.spacing(), gmax / 100);
  const auto fit = hoelder_fit(c, gmin, gmax, pairs);
  const auto est = verify_main_estimate(c, q, pairs, 1.0 / 8.0, g.seed);

  JsonWriter w;
  w.field("q", est.q)
      .field("lambda", est.lambda)
      .field("max_ratio", est.max_ratio)
      .raw("argmax_pair", "[" + format_g17(est.argmax_u) + "," + format_g17(est.argmax_v) + "]")
      .field("cutoff", est.cutoff)
      .field("hoelder_exponent", fit.exponent)
      .field("hoelder_constant", fit.constant)
      .field("fit_residual", fit.residual)
      .field("gap_min", fit.gap_min)
      .field("gap_max", fit.gap_max)
      .field("flags", fit.flags);
  emit(w.str(), out);
  return 0;
}

int run_inscribe(const GlobalOpts& g, const std::string& in, double spacing, double delta2,
                 double q, Eigen::Index m, const std::string& out) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  if (spacing <= 0) {
    // spacing from the inscription rule: delta2 * E^{-1/(q-2)}
    if (!(q > 2)) throw std::invalid_argument("inscribe: --q must exceed 2 to derive spacing");
    spacing = delta2 * std::pow(energy(c, q).value, -1.0 / (q - 2.0));
  }
  const auto poly = inscribe_polygon(c, spacing);
  if (out.empty()) throw std::invalid_argument("inscribe: output path required (-o)");
  write_curve_json(out, poly.as_polyline());
  std::printf("inscribed polygon: N=%lld, spacing bound %s, delta2 %s\n",
              static_cast<long long>(poly.N), format_g17(spacing).c_str(),
              format_g17(delta2).c_str());
  return 0;
}

int run_certify(const GlobalOpts& g, const std::string& in_a, const std::string& in_b, double q,
                double delta, Eigen::Index m, const std::string& out) {
  const auto a = resample_arclength(read_curve(in_a, g.csv_closed), m);
  const auto b = resample_arclength(read_curve(in_b, g.csv_closed), m);
  const auto cert = certify_isotopy(a, b, q, delta);
  JsonWriter w;
  w.field("q", cert.q)
      .field("delta_q", cert.delta_q)
      .field("E1", cert.E1)
      .field("E2", cert.E2)
      .field("threshold", cert.threshold)
      .field("hausdorff", cert.hausdorff)
      .field("verdict", std::string(cert.verdict == IsotopyVerdict::certified ? "certified"
                                                                              : "inconclusive"));
  emit(w.str(), out);
  return cert.verdict == IsotopyVerdict::certified ? 0 : 2;
}

int run_minimize(const GlobalOpts& g, const std::string& in, double q, Eigen::Index iters,
                 double tol, Eigen::Index m, const std::string& out_dir,
                 const std::string& plot) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  MinimizeOptions opts;
  opts.max_iters = iters;
  opts.tol = tol;
  const auto trace = minimize(c, q, opts);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "iterate_%04zu.json", i);
      write_curve_json((fs::path(out_dir) / name).string(), trace.iterates[i].as_polyline());
    }
    std::string csv = "step,energy,step_size,length_residual\n";
    for (std::size_t i = 0; i < trace.energies.size(); ++i)
      csv += std::to_string(i) + "," + format_g17(trace.energies[i]) + "," +
             format_g17(trace.step_sizes[i]) + "," + format_g17(trace.length_residuals[i]) + "\n";
    write_text_file((fs::path(out_dir) / "energies.csv").string(), csv);
  }
  const char* why = trace.terminated == FlowTermination::converged ? "converged"
                    : trace.terminated == FlowTermination::stalled ? "stalled"
                                                                   : "max_iters";
  JsonWriter w;
  w.field("q", q)
      .field("steps", Eigen::Index(trace.energies.size() - 1))
      .field("initial_energy", trace.energies.front())
      .field("final_energy", trace.energies.back())
      .field("terminated", std::string(why));
  std::fputs(w.str().c_str(), stdout);
  if (!plot.empty()) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < trace.energies.size(); ++i) {
      xs.push_back(double(i));
      ys.push_back(trace.energies[i]);
    }
    svg_series(plot, xs, ys, "step", "energy");
  }
  return 0;
}

int run_pulltight(const GlobalOpts& g, double q, const std::string& gaps_str, Eigen::Index m,
                  const std::string& out) {
  const auto res = pull_tight_experiment(parse_list(gaps_str), q, m);
  if (g.format == "csv") {
    std::string s = "gap,energy\n";
    for (const auto& e : res.entries)
      s += format_g17(e.gap) + "," + format_g17(e.energy) + "\n";
    emit(s, out);
  } else {
    std::vector<double> gs, es;
    for (const auto& e : res.entries) {
      gs.push_back(e.gap);
      es.push_back(e.energy);
    }
    JsonWriter w;
    w.field("q", q).field("gaps", gs).field("energies", es).field("loglog_slope",
                                                                  res.loglog_slope);
    emit(w.str(), out);
  }
  return 0;
}

int run_thickness(const GlobalOpts& g, const std::string& in, Eigen::Index m,
                  const std::string& qlist_str, const std::string& out) {
  const auto c = resample_arclength(read_curve(in, g.csv_closed), m);
  const auto th = thickness(c);
  JsonWriter w;
  w.field("thickness", th.value).field("m", m).field("inverse_thickness", 1.0 / th.value);
  if (!qlist_str.empty()) {
    const auto qs = parse_list(qlist_str);
    auto chk = thickness_limit_check(c, qs);
    std::vector<double> roots, normed;
    for (const auto& e : chk.entries) {
      roots.push_back(e.eq_root);
      normed.push_back(e.normalized);
    }
    w.field("q_list", qs).field("eq_roots", roots).field("eq_roots_normalized", normed);
  }
  emit(w.str(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tangent-point self-avoidance energies on discretized curves"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--seed", g.seed, "seed for sampled pair sets");
  app.add_option("--format", g.format, "tabular output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--open", [&g](std::int64_t) { g.csv_closed = false; },
               "treat CSV curve input as an open polyline");

  std::string in, in_b, out, plot, shape = "circle", levels = "64,128,256,512";
  std::string scales = "0.5:0.05:geometric:8", gaps = "0.2,0.1,0.05,0.025", qlist;
  double q = 3, delta = 0.1, delta2 = 0.1, c0 = 0.1, c1 = 0.1, spacing = 0.1, tol = 1e-8,
         gap_min = 0, gap_max = 0;
  Eigen::Index m = 256, exclude = 2, iters = 2000, pairs = 200;
  std::map<std::string, double> shape_params;
  double radius = 1, samples = 256, kcover = 2, vertices = 4, pidx = 2, qidx = 3;
  double major_r = 3, minor_r = 1, exponent = 1.5, amplitude = 0.05, mode = 3, straight = 2,
         dim = 0;

  auto* cmd_gen = app.add_subcommand("generate", "sample a model shape to curve JSON");
  cmd_gen->add_option("--shape", shape,
                      "circle|k_circle|regular_polygon|torus_knot|stadium|power_graph|perturbed_circle");
  cmd_gen->add_option("--radius", radius);
  cmd_gen->add_option("--samples", samples);
  cmd_gen->add_option("--k", kcover, "cover count for k_circle");
  cmd_gen->add_option("--vertices", vertices);
  cmd_gen->add_option("--p", pidx, "torus knot index p");
  cmd_gen->add_option("--q-idx", qidx, "torus knot index q");
  cmd_gen->add_option("--major-radius", major_r);
  cmd_gen->add_option("--minor-radius", minor_r);
  cmd_gen->add_option("--exponent", exponent, "power graph exponent in (1,2]");
  cmd_gen->add_option("--amplitude", amplitude);
  cmd_gen->add_option("--mode", mode);
  cmd_gen->add_option("--straight", straight, "stadium straight length");
  cmd_gen->add_option("--dim", dim, "embed planar shapes in R^3 when 3");
  cmd_gen->add_option("-o,--output", out);
  cmd_gen->add_option("--plot", plot, "write an SVG of the curve");

  auto* cmd_energy = app.add_subcommand("energy", "discrete tangent-point energy E_q");
  cmd_energy->add_option("curve", in)->required();
  cmd_energy->add_option("--q", q);
  cmd_energy->add_option("--m", m);
  cmd_energy->add_option("--exclude", exclude);
  cmd_energy->add_option("-o,--output", out);

  auto* cmd_refine = app.add_subcommand("refine", "energy under grid refinement");
  cmd_refine->add_option("curve", in)->required();
  cmd_refine->add_option("--q", q);
  cmd_refine->add_option("--levels", levels, "comma-separated node counts");
  cmd_refine->add_option("--exclude", exclude);
  cmd_refine->add_option("-o,--output", out);
  cmd_refine->add_option("--plot", plot);

  auto* cmd_beta = app.add_subcommand("beta", "beta-number decay profile");
  cmd_beta->add_option("curve", in)->required();
  cmd_beta->add_option("--q", q);
  cmd_beta->add_option("--scales", scales, "start:stop:geometric|linear[:count]");
  cmd_beta->add_option("--m", m);
  cmd_beta->add_option("--c0", c0, "secant-slab inclusion constant (echoed in the report)");
  cmd_beta->add_option("--c1", c1, "beta-decay bound constant (echoed in the report)");
  cmd_beta->add_option("-o,--output", out, "output prefix (.csv and .json)");
  cmd_beta->add_option("--plot", plot);

  auto* cmd_hoelder = app.add_subcommand("hoelder", "tangent Hoelder fit and main estimate");
  cmd_hoelder->add_option("curve", in)->required();
  cmd_hoelder->add_option("--q", q);
  cmd_hoelder->add_option("--m", m);
  cmd_hoelder->add_option("--pairs", pairs);
  cmd_hoelder->add_option("--gap-min", gap_min);
  cmd_hoelder->add_option("--gap-max", gap_max);
  cmd_hoelder->add_option("-o,--output", out);

  auto* cmd_inscribe = app.add_subcommand("inscribe", "greedy inscribed polygon");
  cmd_inscribe->add_option("curve", in)->required();
  auto* opt_spacing = cmd_inscribe->add_option("--spacing", spacing, "explicit chord bound");
  cmd_inscribe->add_option("--delta2", delta2,
                           "spacing-rule constant, used with --q when --spacing is absent");
  cmd_inscribe->add_option("--q", q);
  cmd_inscribe->add_option("--m", m);
  cmd_inscribe->add_option("-o,--output", out)->required();

  auto* cmd_certify = app.add_subcommand("certify", "isotopy certificate for two curves");
  cmd_certify->add_option("curve_a", in)->required();
  cmd_certify->add_option("curve_b", in_b)->required();
  cmd_certify->add_option("--q", q);
  cmd_certify->add_option("--delta", delta, "constant delta(q)");
  cmd_certify->add_option("--m", m);
  cmd_certify->add_option("-o,--output", out);

  auto* cmd_min = app.add_subcommand("minimize", "fixed-length gradient descent on E_q");
  cmd_min->add_option("curve", in)->required();
  cmd_min->add_option("--q", q);
  cmd_min->add_option("--iters", iters);
  cmd_min->add_option("--tol", tol);
  cmd_min->add_option("--m", m);
  cmd_min->add_option("-o,--output", out, "trace directory");
  cmd_min->add_option("--plot", plot);

  auto* cmd_pull = app.add_subcommand("pulltight", "self-repulsion blow-up experiment");
  cmd_pull->add_option("--q", q);
  cmd_pull->add_option("--gaps", gaps, "decreasing closest-approach distances");
  cmd_pull->add_option("--m", m);
  cmd_pull->add_option("-o,--output", out);

  auto* cmd_thick = app.add_subcommand("thickness", "smallest circumradius over triples");
  cmd_thick->add_option("curve", in)->required();
  cmd_thick->add_option("--m", m);
  cmd_thick->add_option("--q-list", qlist, "exponents for the E_q^{1/q} trend");
  cmd_thick->add_option("-o,--output", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  thread_count() = g.threads;

  try {
    if (cmd_gen->parsed()) {
      shape_params = {{"radius", radius},       {"samples", samples},
                      {"k", kcover},            {"vertices", vertices},
                      {"p", pidx},              {"q", qidx},
                      {"major_radius", major_r}, {"minor_radius", minor_r},
                      {"exponent", exponent},   {"amplitude", amplitude},
                      {"mode", mode},           {"straight", straight}};
      if (dim != 0) shape_params["dim"] = dim;
      return run_generate(g, shape, shape_params, out, plot);
    }
    if (cmd_energy->parsed()) return run_energy(g, in, q, m, exclude, out);
    if (cmd_refine->parsed()) return run_refine(g, in, q, levels, exclude, out, plot);
    if (cmd_beta->parsed()) return run_beta(g, in, q, scales, m, c0, c1, out, plot);
    if (cmd_hoelder->parsed()) return run_hoelder(g, in, q, m, pairs, gap_min, gap_max, out);
    if (cmd_inscribe->parsed())
      return run_inscribe(g, in, opt_spacing->count() ? spacing : -1.0, delta2, q, m, out);
    if (cmd_certify->parsed()) return run_certify(g, in, in_b, q, delta, m, out);
    if (cmd_min->parsed()) return run_minimize(g, in, q, iters, tol, m, out, plot);
    if (cmd_pull->parsed()) return run_pulltight(g, q, gaps, m, out);
    if (cmd_thick->parsed()) return run_thickness(g, in, m, qlist, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
