#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cwv/harness.hpp"
#include "cwv/jsonio.hpp"

namespace {

// Exit codes: 0 all checks pass, 1 some check failed, 2 load/validation error.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitLoadError = 2;

cwv::ReportFormat parse_format(const std::string& word) {
  const auto format = cwv::report_format_from_string(word);
  if (!format.has_value()) {
    throw CLI::ValidationError("--format", "expected json, csv or text");
  }
  return *format;
}

int emit_and_status(const cwv::Report& report, cwv::ReportFormat format) {
  std::cout << cwv::emit_report(report, format);
  return report.all_passed() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contextual weak value toolkit: verifies the variance, error and\n"
               "steering identities of complex weak values on scenario files"};
  app.require_subcommand(1);

  std::string scenario_arg;
  std::string format_word = "text";
  double tolerance = 0.0;
  bool tolerance_set = false;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the identity suite on a scenario file or built-in name");
  verify->add_option("scenario", scenario_arg, "scenario JSON path or built-in name")->required();
  verify->add_option("--format", format_word, "output format: json, csv or text");
  verify
      ->add_option("--tolerance", tolerance,
                   "override the pass/fail tolerance for identity checks")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { tolerance_set = true; });

  std::string nu_basis_word;
  CLI::App* steer = app.add_subcommand(
      "steer", "print the (outcome x reference-outcome) context table of a scenario");
  steer->add_option("scenario", scenario_arg, "scenario JSON path or built-in name")->required();
  steer->add_option("--nu-basis", nu_basis_word,
                    "reference basis: computational, fourier, diagonal, circular, random[:seed]");
  steer->add_option("--format", format_word, "output format: json or text");

  std::vector<double> angles;
  CLI::App* chsh = app.add_subcommand(
      "chsh", "singlet CHSH demonstration: correlations are computed directly and from\n"
              "steered projector weak values on a fixed computational final measurement");
  chsh->add_option("--angles", angles,
                   "four analyzer angles a,a',b,b' in radians; an analyzer at angle t\n"
                   "measures cos(2t) sigma_z + sin(2t) sigma_x "
                   "(defaults 0, pi/4, pi/8, 3pi/8)")
      ->delimiter(',')
      ->expected(4);
  chsh->add_option("--format", format_word, "output format: json, csv or text");

  CLI::App* list = app.add_subcommand("list-builtins", "list built-in scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const cwv::Scenario scenario = cwv::resolve_scenario(scenario_arg);
      const std::optional<double> tol_override =
          tolerance_set ? std::optional<double>(tolerance) : std::nullopt;
      return emit_and_status(cwv::run_identity_suite(scenario, tol_override),
                             parse_format(format_word));
    }
    if (steer->parsed()) {
      const cwv::Scenario scenario = cwv::resolve_scenario(scenario_arg);
      std::optional<cwv::BasisSpec> nu_override;
      if (!nu_basis_word.empty()) nu_override = cwv::BasisSpec::from_keyword(nu_basis_word);
      return emit_and_status(cwv::steering_table(scenario, nu_override),
                             parse_format(format_word));
    }
    if (chsh->parsed()) {
      cwv::ChshOptions options;
      if (!angles.empty()) {
        for (size_t i = 0; i < 4; ++i) options.angles[i] = angles[i];
      }
      return emit_and_status(cwv::chsh_demo(options), parse_format(format_word));
    }
    if (list->parsed()) {
      for (const std::string& name : cwv::builtin_names()) std::cout << name << "\n";
      return kExitPass;
    }
  } catch (const cwv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitLoadError;
  } catch (const cwv::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitLoadError;
  } catch (const cwv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLoadError;
  }
  return kExitLoadError;
}
