#include "ohara/curves.hpp"
#include "ohara/energy.hpp"
#include "ohara/error.hpp"
#include "ohara/experiments.hpp"
#include "ohara/io.hpp"
#include "ohara/phi.hpp"
#include "ohara/sobolev.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Globals {
  unsigned threads = 0;
  std::string format = "csv";
};

// Writes to --out when given, else stdout.
void emit(const std::string &path, const std::function<void(std::ostream &)> &write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out)
    throw ohara::ValidationError("cannot open output file '" + path + "'");
  write(out);
  if (!out)
    throw ohara::NumericError("failed writing '" + path + "'");
}

void emit_table(const std::string &path, const ohara::ResultTable &t) {
  emit(path, [&](std::ostream &os) { t.write_csv(os); });
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"O'Hara knot energies: discrete energies, convergence experiments and Phi diagnostics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv"}))->capture_default_str();

  std::function<void()> action;

  // energy
  std::string polygon_path;
  double e_alpha = 2.0, e_p = 1.0;
  bool normalize = false;
  auto *energy = app.add_subcommand("energy", "Discrete energy of a polygon CSV");
  energy->add_option("--polygon", polygon_path, "Polygon CSV file")->required();
  energy->add_option("--alpha", e_alpha, "Exponent alpha")->capture_default_str();
  energy->add_option("--p", e_p, "Exponent p")->capture_default_str();
  energy->add_flag("--normalize", normalize, "Report L^(alpha p - 2) E instead of E");
  energy->callback([&] {
    action = [&] {
      const ohara::Polygon poly = ohara::read_polygon_csv_file(polygon_path);
      const ohara::EnergyParams params(e_alpha, e_p);
      const ohara::EvalOptions opts{g.threads};
      const double value = normalize ? ohara::scale_invariant_energy(poly, params, opts)
                                     : ohara::discrete_energy(poly, params, opts);
      std::cout << "alpha,p,n,length,normalized,energy\n"
                << ohara::format_double(e_alpha) << ',' << ohara::format_double(e_p) << ','
                << poly.size() << ',' << ohara::format_double(poly.total_length()) << ','
                << (normalize ? 1 : 0) << ',' << ohara::format_double(value) << '\n';
    };
  });

  // table2
  ohara::ExperimentConfig t2;
  std::size_t t2_nmin = 4, t2_nmax = 16384;
  auto *table2 = app.add_subcommand("table2", "Regular n-gon energies, analytic row and D/A ratio");
  table2->add_option("--alphas", t2.alphas, "Comma-separated alpha list")->delimiter(',');
  table2->add_option("--p", t2.p, "Exponent p")->capture_default_str();
  table2->add_option("--nmin", t2_nmin, "Smallest n of the doubling ladder")->capture_default_str();
  table2->add_option("--nmax", t2_nmax, "Largest n of the doubling ladder")->capture_default_str();
  table2->add_option("--out", t2.output, "Output CSV (default stdout)");
  table2->callback([&] {
    action = [&] {
      t2.n_values = ohara::doubling_schedule(t2_nmin, t2_nmax);
      t2.eval.threads = g.threads;
      emit_table(t2.output, ohara::run_table2(t2));
    };
  });

  // errscale
  ohara::ExperimentConfig es;
  std::size_t es_nmin = 4, es_nmax = 4096;
  auto *errscale = app.add_subcommand("errscale", "Error scaling of regular n-gon energies");
  errscale->add_option("--alpha", es.alphas, "Exponent alpha (repeatable or comma-separated)")
      ->delimiter(',')
      ->required();
  errscale->add_option("--nmin", es_nmin, "Smallest n")->capture_default_str();
  errscale->add_option("--nmax", es_nmax, "Largest n")->capture_default_str();
  errscale->add_option("--out", es.output, "Output CSV (default stdout)");
  errscale->callback([&] {
    action = [&] {
      es.n_values = ohara::doubling_schedule(es_nmin, es_nmax);
      es.eval.threads = g.threads;
      emit_table(es.output, ohara::run_error_scaling(es));
    };
  });

  // parity
  ohara::ExperimentConfig par;
  par.p = 30.0;
  double par_alpha = 2.0;
  std::size_t par_nmax = 100;
  auto *parity = app.add_subcommand("parity", "Even/odd and power-of-two series of regular n-gon energies");
  parity->add_option("--nmax", par_nmax, "Largest n")->capture_default_str();
  parity->add_option("--alpha", par_alpha, "Exponent alpha")->capture_default_str();
  parity->add_option("--p", par.p, "Exponent p")->capture_default_str();
  parity->add_option("--out", par.output, "Output CSV (default stdout)");
  parity->callback([&] {
    action = [&] {
      par.alphas = {par_alpha};
      par.n_values = {par_nmax};
      par.eval.threads = g.threads;
      emit_table(par.output, ohara::run_parity_study(par));
    };
  });

  // minimizer
  ohara::ExperimentConfig mn;
  auto *minimizer = app.add_subcommand("minimizer", "Random equilateral n-gons against the regular n-gon");
  minimizer->add_option("--n", mn.n_values, "Vertex counts (comma-separated)")->delimiter(',')->required();
  minimizer->add_option("--trials", mn.trials, "Trials per (n, alpha)")->capture_default_str();
  minimizer->add_option("--seed", mn.seed, "Random seed")->capture_default_str();
  minimizer->add_option("--alpha", mn.alphas, "Exponents alpha (comma-separated)")->delimiter(',')->required();
  minimizer->add_option("--p", mn.p, "Exponent p")->capture_default_str();
  minimizer->add_option("--sigma", mn.perturbation, "Turning-angle noise, radians")->capture_default_str();
  minimizer->add_option("--out", mn.output, "Output CSV (default stdout)");
  minimizer->callback([&] {
    action = [&] {
      mn.eval.threads = g.threads;
      emit_table(mn.output, ohara::run_minimizer_property(mn));
    };
  });

  // phi-report
  ohara::ExperimentConfig pr;
  std::string pr_family;
  double pr_p = 0.0;
  auto *phi_report = app.add_subcommand("phi-report", "Assumption verdicts over the alpha grid");
  phi_report->add_option("--family", pr_family, "power, powerlog or expfam (default all)")
      ->check(CLI::IsMember({"power", "powerlog", "expfam"}));
  phi_report->add_option("--p", pr_p, "Exponent p (default 1 and 2)");
  phi_report->add_option("--out", pr.output, "Output CSV (default stdout)");
  phi_report->callback([&] {
    action = [&] {
      if (!pr_family.empty())
        pr.families = {pr_family};
      if (pr_p != 0.0)
        pr.ps = {pr_p};
      emit_table(pr.output, ohara::run_phi_report(pr));
    };
  });

  // inscribe
  std::string curve_spec, mode = "arc", in_out;
  std::size_t in_n = 64;
  auto *inscribe = app.add_subcommand("inscribe", "Inscribed polygon of a curve as CSV");
  inscribe->add_option("--curve", curve_spec, "circle:r=1 or torus:a=2,b=3,R=2,r=1")->required();
  inscribe->add_option("--n", in_n, "Vertex count")->capture_default_str();
  inscribe->add_option("--mode", mode, "arc or chord")->check(CLI::IsMember({"arc", "chord"}))->capture_default_str();
  inscribe->add_option("--out", in_out, "Output CSV (default stdout)");
  inscribe->callback([&] {
    action = [&] {
      const ohara::ParamCurve curve = ohara::parse_curve_spec(curve_spec);
      const ohara::InscribedPolygon ip =
          mode == "arc" ? ohara::inscribe_equal_arc(curve, in_n) : ohara::inscribe_equal_chord(curve, in_n);
      emit(in_out, [&](std::ostream &os) {
        os << "# curve=" << curve.name() << " n=" << in_n << " mode=" << mode
           << " c_lower=" << ohara::format_double(ip.c_lower)
           << " c_upper=" << ohara::format_double(ip.c_upper)
           << " min_gap=" << ohara::format_double(ip.embedding.min_gap) << '\n';
        ohara::write_polygon_csv(os, ip.polygon);
      });
    };
  });

  // sobolev
  std::string sb_curve, sb_family = "power", sb_out;
  double sb_alpha = 2.0, sb_p = 1.0;
  std::size_t sb_nmax = 1024;
  auto *sobolev = app.add_subcommand("sobolev", "Seminorm cutoff ladder and finiteness verdict");
  sobolev->add_option("--curve", sb_curve, "circle:r=1 or torus:a=2,b=3,R=2,r=1")->required();
  sobolev->add_option("--family", sb_family, "power, powerlog or expfam")
      ->check(CLI::IsMember({"power", "powerlog", "expfam"}))
      ->capture_default_str();
  sobolev->add_option("--alpha", sb_alpha, "Family exponent alpha")->capture_default_str();
  sobolev->add_option("--p", sb_p, "Exponent p")->capture_default_str();
  sobolev->add_option("--energy-nmax", sb_nmax, "Largest n of the discrete energy ladder")->capture_default_str();
  sobolev->add_option("--out", sb_out, "Output CSV (default stdout)");
  sobolev->callback([&] {
    action = [&] {
      const ohara::ParamCurve curve = ohara::parse_curve_spec(sb_curve);
      const ohara::PhiSpec phi = ohara::make_phi(sb_family, sb_alpha);
      ohara::FinitenessOptions opts;
      opts.energy_n_max = sb_nmax;
      opts.eval.threads = g.threads;
      const ohara::FinitenessReport rep = ohara::finiteness_diagnostic(curve, phi, sb_p, opts);
      emit(sb_out, [&](std::ostream &os) {
        os << "# curve=" << curve.name() << " phi=" << phi.name << " p=" << ohara::format_short(sb_p)
           << " classification=" << ohara::to_string(rep.classification)
           << " tail_ratio=" << ohara::format_double(rep.tail_ratio)
           << " seminorm_limit=" << ohara::format_double(rep.seminorm_limit);
        if (rep.divergence_exponent)
          os << " divergence_exponent=" << ohara::format_double(*rep.divergence_exponent);
        os << " energy_estimate=" << ohara::format_double(rep.energy_estimate)
           << " energy_extrapolated=" << (rep.energy_extrapolated ? 1 : 0) << '\n';
        for (const auto &lvl : rep.energy_ladder)
          os << "# energy n=" << lvl.n << " value=" << ohara::format_double(lvl.value) << '\n';
        ohara::write_finiteness_csv(os, rep);
      });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    action();
  } catch (const ohara::ValidationError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ohara::NumericError &e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
