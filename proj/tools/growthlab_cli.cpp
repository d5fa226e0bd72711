// growthlab command-line front end.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "growthlab/growthlab.hpp"
#include "growthlab/io.hpp"

namespace gl = growthlab;
using gl::io::json;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string(flag) + ": cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ValidationError(std::string(flag) + ": empty list");
  return out;
}

/// "re,im;re,im" -> (f0, f0')
std::pair<gl::cplx, gl::cplx> parse_ic(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw ValidationError("--ic: expected \"re,im;re,im\"");
  auto one = [](const std::string& part) {
    const auto v = parse_list(part, "--ic");
    if (v.size() != 2) throw ValidationError("--ic: each value needs exactly re,im");
    return gl::cplx(v[0], v[1]);
  };
  return {one(s.substr(0, semi)), one(s.substr(semi + 1))};
}

std::vector<gl::cplx> poly_coeffs(const std::string& spec) {
  const auto f = gl::parse_spec(spec);
  const auto* p = std::get_if<gl::PolyNode>(&f.node().v);
  if (!p) throw ValidationError("--P must be a poly(...) spec");
  return p->coeffs;
}

/// Sends text to --out when given, otherwise to stdout.
void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file " + out_path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growthlab: growth quantities of entire functions and f'' + A f' + B f = 0"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string out_path, format = "csv";
  double rel_tol = 1e-10;
  auto common = [&](CLI::App* sc, bool csv) {
    sc->add_option("--out", out_path, "Output file (default: stdout)");
    if (csv)
      sc->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  };

  // growth
  std::string f_spec;
  double rmin = 1, rmax = 100;
  int points = 12;
  auto* growth = app.add_subcommand("growth", "Profile of log M, log L and T on a geometric grid");
  growth->add_option("--f", f_spec, "Function spec")->required();
  growth->add_option("--rmin", rmin, "Smallest radius")->capture_default_str();
  growth->add_option("--rmax", rmax, "Largest radius")->capture_default_str();
  growth->add_option("--points", points, "Grid points")->capture_default_str();
  common(growth, true);

  // order
  auto* order = app.add_subcommand("order", "Finite-scale order and lower order from a growth profile");
  order->add_option("--f", f_spec, "Function spec")->required();
  order->add_option("--rmin", rmin, "Smallest radius")->capture_default_str();
  order->add_option("--rmax", rmax, "Largest radius")->capture_default_str();
  order->add_option("--points", points, "Grid points")->capture_default_str();
  common(order, false);

  // sectors
  std::string P_spec, ic_spec;
  double sector_rmax = 0;
  auto* sectors = app.add_subcommand("sectors", "Sector boundaries of w'' + P w = 0, optionally classifying a solution");
  sectors->add_option("--P", P_spec, "Polynomial spec poly(...)")->required();
  sectors->add_option("--ic", ic_spec, "Solution values at the origin \"re,im;re,im\"; enables classification");
  sectors->add_option("--rmax", sector_rmax, "Classification radius (default 40 for deg P <= 2, else 20)");
  common(sectors, false);

  // solve-ray
  std::string A_spec, B_spec;
  double theta = 0, r0 = 0.01;
  int ray_points = 0;
  auto* solve = app.add_subcommand("solve-ray", "Integrate f'' + A f' + B f = 0 along a ray");
  solve->add_option("--A", A_spec, "Coefficient A")->required();
  solve->add_option("--B", B_spec, "Coefficient B")->required();
  solve->add_option("--theta", theta, "Ray angle")->capture_default_str();
  solve->add_option("--ic", ic_spec, "f(r0 e^{i theta}), f'(r0 e^{i theta}) as \"re,im;re,im\"")->required();
  solve->add_option("--r0", r0, "Starting radius")->capture_default_str();
  solve->add_option("--rmax", rmax, "Final radius")->capture_default_str();
  solve->add_option("--points", ray_points, "Uniform output radii (0: every accepted step)")->capture_default_str();
  solve->add_option("--tol", rel_tol, "Relative tolerance")->capture_default_str();
  common(solve, true);

  // zeros
  double eps = 0.05, radius = 10;
  auto* zeros = app.add_subcommand("zeros", "Zeros in {|z| <= r, |arg z - theta| <= eps} by the argument principle");
  zeros->add_option("--f", f_spec, "Explicit function spec (alternative to --A/--B/--ic)");
  zeros->add_option("--A", A_spec, "Coefficient A of the equation");
  zeros->add_option("--B", B_spec, "Coefficient B of the equation");
  zeros->add_option("--ic", ic_spec, "Solution values at the origin \"re,im;re,im\"");
  zeros->add_option("--theta", theta, "Sector centre")->capture_default_str();
  zeros->add_option("--eps", eps, "Sector half-width (>= pi: full disk)")->capture_default_str();
  zeros->add_option("--r", radius, "Radius")->capture_default_str();
  zeros->add_option("--tol", rel_tol, "Relative tolerance")->capture_default_str();
  common(zeros, false);

  // check-example
  std::string example_id;
  auto* check = app.add_subcommand("check-example", "Reproduce a worked example (JSON report and text table)");
  check->add_option("--id", example_id, "Example id")->required()->check(CLI::IsMember({"a", "b", "c", "d"}));
  common(check, false);

  // theorem-report
  auto* report = app.add_subcommand("theorem-report", "Hypothesis verdicts for a coefficient pair");
  report->add_option("--A", A_spec, "Coefficient A")->required();
  report->add_option("--B", B_spec, "Coefficient B")->required();
  report->add_option("--P", P_spec, "Polynomial P for which A should solve w'' + P w = 0");
  common(report, false);

  // diagnose
  std::string theta_list = "2.5,3,3.5,4", schedule = "5,7,9,11";
  std::uint64_t seed = 1;
  auto* diag = app.add_subcommand("diagnose", "Windowed solution orders across a radius schedule");
  diag->add_option("--A", A_spec, "Coefficient A")->required();
  diag->add_option("--B", B_spec, "Coefficient B")->required();
  diag->add_option("--theta-list", theta_list, "Comma-separated ray angles (at least 3)")->capture_default_str();
  diag->add_option("--schedule", schedule, "Comma-separated final radii (at least 3)")->capture_default_str();
  diag->add_option("--seed", seed, "Seed for the random initial values")->capture_default_str();
  diag->add_option("--ic", ic_spec, "Explicit f(0), f'(0) as \"re,im;re,im\" instead of random values");
  diag->add_option("--tol", rel_tol, "Relative tolerance")->capture_default_str();
  common(diag, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    gl::Controller ctrl;
    ctrl.rel_tol = rel_tol;
    if (!(rel_tol > 0)) throw ValidationError("--tol must be positive");

    if (growth->parsed() || order->parsed()) {
      if (!(rmin > 0) || !(rmax > rmin) || points < 2) throw ValidationError("grid needs 0 < rmin < rmax and points >= 2");
      const auto f = gl::parse_spec(f_spec);
      const auto prof = gl::growth_profile(f, rmin, rmax, points);
      json grid = {{"rmin", rmin}, {"rmax", rmax}, {"points", points}};
      if (growth->parsed() && format == "csv") {
        std::ostringstream os;
        gl::io::write_profile_csv(os, prof);
        emit(out_path, os.str());
        return 0;
      }
      json estimates = json::object();
      json checks = json::object();
      try {
        const auto est = gl::order_estimate(prof);
        estimates["rho"] = gl::io::jnum(est.rho);
        estimates["mu"] = gl::io::jnum(est.mu);
        if (order->parsed()) estimates["detail"] = gl::io::to_json(est);
      } catch (const gl::DomainError& e) {
        estimates["order_error"] = e.what();
      }
      const auto pz = gl::collect_product_zeros(f);
      if (pz.size() >= 8) {
        gl::ZeroSequence zs;
        zs.zeros = pz;
        estimates["lambda"] = gl::io::jnum(gl::convergence_exponent(zs));
      }
      if (growth->parsed() && prof.rows.back().r * prof.ratio > 10) checks["tsim"] = gl::io::to_json(gl::tsim_check(prof, 0.1));
      json j = {{"schema_version", gl::io::kSchemaVersion}, {"function", f_spec}, {"grid", grid}};
      if (growth->parsed()) j["rows"] = gl::io::to_json(prof);
      j["estimates"] = estimates;
      if (growth->parsed()) j["checks"] = checks;
      emit(out_path, dump(j));
      return 0;
    }

    if (sectors->parsed()) {
      const auto P = poly_coeffs(P_spec);
      const auto s = gl::hille_sectors(P);
      json j = {{"schema_version", gl::io::kSchemaVersion}, {"P", P_spec}};
      const json sj = gl::io::to_json(s);
      j["degree"] = sj["degree"];
      j["width"] = sj["width"];
      j["thetas"] = sj["thetas"];
      if (!ic_spec.empty()) {
        const auto [w0, w0p] = parse_ic(ic_spec);
        gl::SectorOptions opt;
        opt.r_max = sector_rmax;
        opt.ctrl = ctrl;
        json verdicts = json::array();
        for (int k = 0; k < static_cast<int>(s.thetas.size()); ++k) verdicts.push_back(gl::io::to_json(gl::classify_sector(P, w0, w0p, k, opt)));
        j["ic"] = ic_spec;
        j["verdicts"] = verdicts;
      }
      emit(out_path, dump(j));
      return 0;
    }

    if (solve->parsed()) {
      const auto A = gl::parse_spec(A_spec), B = gl::parse_spec(B_spec);
      const auto [f0, f0p] = parse_ic(ic_spec);
      if (!(r0 > 0) || !(rmax > r0)) throw ValidationError("solve-ray needs 0 < r0 < rmax");
      if (ray_points < 0) throw ValidationError("--points must be non-negative");
      std::vector<double> outs;
      if (ray_points > 0)
        for (int i = 0; i <= ray_points; ++i) outs.push_back(i == ray_points ? rmax : r0 + (rmax - r0) * i / ray_points);
      const auto sol = gl::ray_integrate(A, B, theta, r0, rmax, f0, f0p, ctrl, ray_points > 0 ? &outs : nullptr);
      if (format == "csv") {
        std::ostringstream os;
        gl::io::write_ray_csv(os, sol);
        emit(out_path, os.str());
      } else {
        json j = {{"schema_version", gl::io::kSchemaVersion}, {"A", A_spec}, {"B", B_spec}, {"ic", ic_spec}, {"r0", r0}, {"rmax", rmax}};
        j["solution"] = gl::io::to_json(sol);
        emit(out_path, dump(j));
      }
      return 0;
    }

    if (zeros->parsed()) {
      gl::ZeroCount c;
      json j = {{"schema_version", gl::io::kSchemaVersion}};
      if (!f_spec.empty()) {
        if (!A_spec.empty() || !B_spec.empty() || !ic_spec.empty()) throw ValidationError("use either --f or --A/--B/--ic");
        c = gl::sector_zero_count(gl::parse_spec(f_spec), theta, eps, radius);
        j["function"] = f_spec;
      } else {
        if (A_spec.empty() || B_spec.empty() || ic_spec.empty()) throw ValidationError("zeros needs --f, or all of --A, --B and --ic");
        const auto [f0, f0p] = parse_ic(ic_spec);
        c = gl::sector_zero_count(gl::parse_spec(A_spec), gl::parse_spec(B_spec), f0, f0p, theta, eps, radius, ctrl);
        j["A"] = A_spec;
        j["B"] = B_spec;
        j["ic"] = ic_spec;
      }
      j["theta"] = theta;
      j["eps"] = eps;
      j["r"] = radius;
      j["result"] = gl::io::to_json(c);
      emit(out_path, dump(j));
      return 0;
    }

    if (check->parsed()) {
      const auto rep = gl::run_example(example_id[0]);
      const std::string text = dump(gl::io::to_json(rep));
      std::ostringstream table;
      gl::io::write_example_table(table, rep);
      if (out_path.empty()) {
        std::cout << text;
        std::cerr << table.str();
      } else {
        emit(out_path, text);
        std::cout << table.str();
      }
      return 0;
    }

    if (report->parsed()) {
      gl::HypothesisOptions opt;
      if (!P_spec.empty()) opt.P = poly_coeffs(P_spec);
      const auto rep = gl::theorem_hypotheses_report(gl::parse_spec(A_spec), gl::parse_spec(B_spec), opt);
      json j = {{"schema_version", gl::io::kSchemaVersion}, {"A", A_spec}, {"B", B_spec}};
      if (!P_spec.empty()) j["P"] = P_spec;
      j["report"] = gl::io::to_json(rep);
      emit(out_path, dump(j));
      return 0;
    }

    if (diag->parsed()) {
      gl::DiagnosticOptions opt;
      opt.seed = seed;
      opt.ctrl = ctrl;
      if (!ic_spec.empty()) opt.ic = parse_ic(ic_spec);
      const auto rep = gl::infinite_order_diagnostic(gl::parse_spec(A_spec), gl::parse_spec(B_spec), parse_list(theta_list, "--theta-list"),
                                                     parse_list(schedule, "--schedule"), opt);
      json j = {{"schema_version", gl::io::kSchemaVersion}, {"A", A_spec}, {"B", B_spec}, {"seed", seed}};
      j["report"] = gl::io::to_json(rep);
      emit(out_path, dump(j));
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gl::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
