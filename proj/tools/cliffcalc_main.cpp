// Command-line driver: runs the verification battery and applies the five
// contour-integral functional calculi to user-supplied operators.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliffcalc/battery.hpp"
#include "cliffcalc/io.hpp"
#include "cliffcalc/operator_calculus.hpp"

namespace {

using nlohmann::json;

std::vector<int> parse_ns(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

int cmd_run(const std::string& ns_csv, std::uint64_t seed, const std::string& checks,
            double tol_scale, int nodes, const std::string& out_path, const std::string& format) {
  cliff::battery::BatteryConfig cfg;
  if (!ns_csv.empty()) cfg.ns = parse_ns(ns_csv);
  cfg.seed = seed;
  cfg.tol_scale = tol_scale;
  cfg.nodes = nodes;
  cfg.out_path = out_path;
  cfg.format = format;
  if (!checks.empty()) {
    std::stringstream ss(checks);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.check_globs.push_back(tok);
  }

  const auto outcome = cliff::battery::run_battery(cfg);
  for (const auto& r : outcome.results) {
    std::cout << (r.status == "pass" ? "[pass] " : r.status == "skip" ? "[skip] " : "[FAIL] ")
              << r.id << " (n=" << r.n << ") defect=" << r.defect << " tol=" << r.tol << "\n";
  }
  const std::string report = cfg.format == "csv"
                                 ? cliff::battery::report_csv(outcome)
                                 : cliff::battery::report_json(outcome, cfg);
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path);
    if (!f) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return 2;
    }
    f << report;
  } else if (cfg.format == "csv") {
    std::cout << report;
  }
  return outcome.exit_code;
}

cliff::Calculus parse_calc(const std::string& name) {
  if (name == "S") return cliff::Calculus::S;
  if (name == "F") return cliff::Calculus::F;
  if (name == "polyharmonic") return cliff::Calculus::Polyharmonic;
  if (name == "cliffordian") return cliff::Calculus::Cliffordian;
  if (name == "polyanalytic") return cliff::Calculus::Polyanalytic;
  throw CLI::ValidationError("--calc must be one of S, F, polyharmonic, cliffordian, polyanalytic");
}

int cmd_apply(const std::string& calc_name, int param, const std::string& op_path,
              const std::string& poly_path, const std::string& contour_path,
              const std::string& out_path) {
  using namespace cliff;
  const CommutingParavectorOp T = io::operator_from_json(io::load_json_file(op_path));
  const Algebra& alg = T.algebra();
  const SlicePolynomial f = io::polynomial_from_json(alg, io::load_json_file(poly_path));
  const ContourSpec contour = io::contour_from_json(io::load_json_file(contour_path), alg.n());
  const Calculus calc = parse_calc(calc_name);

  const CliffordMatrix result = contour_calculus(calc, param, f, T, contour);

  // contour-invariance self-check: wider radius, rotated slice
  ContourSpec alt = contour;
  alt.radius *= 1.3;
  std::rotate(alt.slice_unit.begin(), alt.slice_unit.begin() + 1, alt.slice_unit.end());
  double norm2 = 0;
  for (double v : alt.slice_unit) norm2 += v * v;
  if (norm2 < 0.5) alt.slice_unit = contour.slice_unit;
  const CliffordMatrix check = contour_calculus(calc, param, f, T, alt);
  const double delta = (result - check).norm();

  json dump = io::matrix_to_json(result);
  dump["calculus"] = calc_name;
  dump["param"] = param;
  dump["contour_invariance_delta"] = delta;
  if (out_path.empty())
    std::cout << dump.dump(2) << "\n";
  else
    io::save_json_file(dump, out_path);
  std::cerr << "contour-invariance self-check delta: " << delta << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford fine-structure kernels, functional calculi and verification battery"};
  app.require_subcommand(0, 1);

  std::string ns_csv, checks, out_path, format = "json";
  std::uint64_t seed = 2024;
  double tol_scale = 1.0;
  int nodes = 256;
  bool list_flag = false;

  auto* run = app.add_subcommand("run", "run the verification battery");
  run->add_option("--n", ns_csv, "comma-separated n values (default 3,5,7)");
  run->add_option("--seed", seed, "deterministic seed");
  run->add_option("--checks", checks, "comma-separated id globs, e.g. 'identity.*'");
  run->add_option("--tol-scale", tol_scale, "multiply every tolerance");
  run->add_option("--nodes", nodes, "contour quadrature nodes");
  run->add_option("--out", out_path, "report file path");
  run->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--list-checks", list_flag, "list check ids and exit");

  std::string calc_name, op_path, poly_path, contour_path, apply_out;
  int param = 0;
  auto* apply = app.add_subcommand("apply", "apply a functional calculus to an operator file");
  apply->add_option("--calc", calc_name, "S | F | polyharmonic | cliffordian | polyanalytic")
      ->required();
  apply->add_option("--param", param, "l or alpha for the parametrized calculi");
  apply->add_option("--operator", op_path, "operator JSON file")->required();
  apply->add_option("--poly", poly_path, "slice polynomial JSON file")->required();
  apply->add_option("--contour", contour_path, "contour JSON file")->required();
  apply->add_option("--out", apply_out, "matrix dump path (stdout when omitted)");

  auto* list = app.add_subcommand("list-checks", "list check ids and anchors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed() || list_flag) {
      for (const auto& info : cliff::battery::list_checks()) {
        std::cout << info.id << "  [" << info.anchor << "]  n={";
        for (std::size_t i = 0; i < info.ns.size(); ++i)
          std::cout << (i ? "," : "") << info.ns[i];
        std::cout << "}\n";
      }
      return 0;
    }
    if (run->parsed())
      return cmd_run(ns_csv, seed, checks, tol_scale, nodes, out_path, format);
    if (apply->parsed())
      return cmd_apply(calc_name, param, op_path, poly_path, contour_path, apply_out);
    std::cout << app.help();
    return 0;
  } catch (const cliff::HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return 1;
  } catch (const cliff::io::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
