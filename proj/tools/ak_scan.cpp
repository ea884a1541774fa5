// ak-scan: grid sweeps, point reports, self-checks and extremization for
// the balanced simultaneous-measurement model.
//
// Exit codes: 0 success (verify: all checks passed), 1 failed checks or
// invariant violations, 2 usage errors, 3 numerical failures.

#include <clocale>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "akscan/akscan.hpp"

namespace {

using akscan::Real;

struct GridFlags {
  Real r_min = -5, r_max = 5;
  int r_steps = 201;
  std::string theta_min = "0", theta_max = "pi:0.5";
  int theta_steps = 181;

  void attach(CLI::App* cmd) {
    cmd->add_option("--r-min", r_min, "lower squeezing bound")
        ->capture_default_str();
    cmd->add_option("--r-max", r_max, "upper squeezing bound")
        ->capture_default_str();
    cmd->add_option("--r-steps", r_steps, "grid steps along r (>= 2)")
        ->capture_default_str();
    cmd->add_option("--theta-min", theta_min,
                    "lower angle bound (radians, or pi:x for x*pi)")
        ->capture_default_str();
    cmd->add_option("--theta-max", theta_max, "upper angle bound")
        ->capture_default_str();
    cmd->add_option("--theta-steps", theta_steps,
                    "grid steps along theta (>= 2)")
        ->capture_default_str();
  }

  akscan::SweepGrid grid() const {
    akscan::SweepGrid g;
    g.r_min = r_min;
    g.r_max = r_max;
    g.r_steps = r_steps;
    g.theta_min = akscan::parse_angle(theta_min);
    g.theta_max = akscan::parse_angle(theta_max);
    g.theta_steps = theta_steps;
    g.validate();
    return g;
  }
};

int with_output(const std::string& path,
                const std::function<void(std::ostream&)>& emit) {
  if (path.empty()) {
    emit(std::cout);
    return 0;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw std::invalid_argument("cannot open output file '" + path + "'");
  emit(os);
  os.flush();
  if (!os)
    throw std::invalid_argument("write to output file '" + path + "' failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");

  CLI::App app{
      "phase-space scanner for a pure squeezed mode read out by two "
      "balanced detectors"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "tabulate entanglement fields on a grid");
  GridFlags sweep_grid;
  sweep_grid.attach(sweep_cmd);
  Real sweep_q = 0, sweep_p = 0;
  std::string sweep_out, sweep_format = "csv";
  sweep_cmd->add_option("--q", sweep_q, "mean position of the system mode")
      ->capture_default_str();
  sweep_cmd->add_option("--p", sweep_p, "mean momentum of the system mode")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "output file (default stdout)");
  sweep_cmd->add_option("--format", sweep_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // point
  auto* point_cmd =
      app.add_subcommand("point", "full report for one parameter point");
  Real point_r = 0;
  std::string point_theta = "0";
  Real point_q = 0, point_p = 0;
  std::string point_out, point_format = "text";
  point_cmd->add_option("--r", point_r, "squeezing parameter")->required();
  point_cmd
      ->add_option("--theta", point_theta,
                   "squeezing angle (radians, or pi:x for x*pi)")
      ->required();
  point_cmd->add_option("--q", point_q, "mean position of the system mode")
      ->capture_default_str();
  point_cmd->add_option("--p", point_p, "mean momentum of the system mode")
      ->capture_default_str();
  point_cmd->add_option("--out", point_out, "output file (default stdout)");
  point_cmd->add_option("--format", point_format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the invariant self-check battery (exit 0 iff clean)");
  Real verify_tol = -1;
  bool inject_defect = false;
  std::string verify_out, verify_format = "text";
  verify_cmd
      ->add_option("--tol", verify_tol,
                   "override every per-check tolerance with one value")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--inject-oracle-defect", inject_defect)->group("");
  verify_cmd->add_option("--out", verify_out, "output file (default stdout)");
  verify_cmd->add_option("--format", verify_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  // extremize
  auto* ext_cmd = app.add_subcommand(
      "extremize", "locate a grid + golden-section extremum of one field");
  GridFlags ext_grid;
  ext_grid.attach(ext_cmd);
  std::string ext_quantity, ext_mode = "max";
  Real ext_q = 0, ext_p = 0;
  std::string ext_out, ext_format = "text";
  ext_cmd
      ->add_option("--quantity", ext_quantity,
                   "sweep column to extremize (e.g. nu3_f1, E_ds, a3)")
      ->required();
  ext_cmd->add_option("--mode", ext_mode, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  ext_cmd->add_option("--q", ext_q, "mean position of the system mode")
      ->capture_default_str();
  ext_cmd->add_option("--p", ext_p, "mean momentum of the system mode")
      ->capture_default_str();
  ext_cmd->add_option("--out", ext_out, "output file (default stdout)");
  ext_cmd->add_option("--format", ext_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sweep_cmd)) {
      const auto rows = akscan::sweep(sweep_grid.grid(), sweep_q, sweep_p);
      return with_output(sweep_out, [&](std::ostream& os) {
        if (sweep_format == "json")
          akscan::write_sweep_json(os, rows);
        else
          akscan::write_sweep_csv(os, rows);
      });
    }
    if (app.got_subcommand(point_cmd)) {
      const auto rep = akscan::point_report(
          point_r, akscan::parse_angle(point_theta), point_q, point_p);
      return with_output(point_out, [&](std::ostream& os) {
        if (point_format == "csv")
          akscan::write_point_csv(os, rep);
        else if (point_format == "json")
          akscan::write_point_json(os, rep);
        else
          akscan::write_point_text(os, rep);
      });
    }
    if (app.got_subcommand(verify_cmd)) {
      const auto rep = akscan::run_verify(verify_tol, inject_defect);
      with_output(verify_out, [&](std::ostream& os) {
        if (verify_format == "json")
          akscan::write_verify_json(os, rep);
        else
          akscan::write_verify_text(os, rep);
      });
      return rep.all_pass ? 0 : 1;
    }
    if (app.got_subcommand(ext_cmd)) {
      const auto res = akscan::extremize(ext_quantity, ext_mode == "max",
                                         ext_grid.grid(), ext_q, ext_p);
      return with_output(ext_out, [&](std::ostream& os) {
        if (ext_format == "json")
          akscan::write_extremize_json(os, res);
        else
          akscan::write_extremize_text(os, res);
      });
    }
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const akscan::numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
