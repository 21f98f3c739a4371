#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cartan/cartan.hpp"

namespace {

struct Globals {
  bool json = false;
  double tol = cartan::kCliTol;
  std::uint64_t seed = 0;
  std::string out;
};

cartan::DomainDescriptor parse_domain(const std::string& s) { return cartan::DomainDescriptor::parse(s); }

int emit(const cartan::CommandResult& r, const Globals& g) {
  if (g.json)
    std::cout << r.report.dump(2) << "\n";
  else
    std::cout << r.text;
  if (!g.out.empty()) cartan::write_text_file(g.out, r.report.dump(2) + "\n");
  return r.exit_status;
}

cartan::TupleFile load_tuple(const std::string& path, const std::string& domain) {
  auto j = cartan::read_json_file(path);
  if (!domain.empty() && j.is_object()) {
    const auto d = parse_domain(domain);
    if (!j.contains("descriptor"))
      j["descriptor"] = d.to_string();
    else if (j["descriptor"].is_string() && !(parse_domain(j["descriptor"].get<std::string>()) == d))
      throw cartan::Error(cartan::ErrorKind::ArityMismatch,
                          "--domain " + d.to_string() + " does not match file descriptor " + j["descriptor"].dump());
  }
  return cartan::tuple_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan domain isometry verifier and intertwiner lifting lab"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json, "print the JSON report on stdout");
  app.add_option("--tol", g.tol, "numerical tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "also write the JSON report to FILE");

  std::string domain, input, model_s, model_t, mode = "both", extension = "reducing";
  std::size_t count = 1, trials = 200;
  std::optional<double> off_scale;

  auto* sample = app.add_subcommand("sample", "sample Shilov boundary points");
  sample->add_option("--domain", domain, "domain descriptor, e.g. I(2,3)xIV(2)")->required();
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--off-shilov-scale", off_scale, "scale each point by this factor");

  auto* classify = app.add_subcommand("classify", "decide whether a commuting tuple is a boundary isometry");
  classify->add_option("--domain", domain, "descriptor (must match the file's, if it has one)");
  classify->add_option("--input", input, "tuple JSON file")->required();
  classify->add_option("--mode", mode)->check(CLI::IsMember({"spectral", "identities", "both"}))->capture_default_str();

  auto* equiv = app.add_subcommand("equiv", "compare the spectral and identity classifiers on random tuples");
  equiv->add_option("--domain", domain)->required();
  equiv->add_option("--trials", trials)->capture_default_str();

  auto* canonical = app.add_subcommand("canonical", "block canonical form of an antisymmetric matrix");
  canonical->add_option("--input", input, "matrix JSON file")->required();

  auto* lift = app.add_subcommand("lift", "lift intertwiners between two atomic subnormal models");
  lift->add_option("--model-s", model_s)->required();
  lift->add_option("--model-t", model_t)->required();
  lift->add_option("--extension", extension, "extension space used for the lift")
      ->check(CLI::IsMember({"reducing", "ambient"}))
      ->capture_default_str();

  auto* explain = app.add_subcommand("explain", "print the identity set of a domain");
  explain->add_option("--domain", domain)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cartan::exit_code::kBadInput;
  }

  try {
    using namespace cartan;
    if (*sample) return emit(cmd_sample(parse_domain(domain), count, g.seed, off_scale, g.tol), g);
    if (*classify) {
      const auto m = mode == "spectral" ? ClassifyMode::Spectral
                     : mode == "identities" ? ClassifyMode::Identities
                                            : ClassifyMode::Both;
      return emit(cmd_classify(load_tuple(input, domain), g.tol, m), g);
    }
    if (*equiv) return emit(cmd_equiv(parse_domain(domain), trials, g.seed, g.tol), g);
    if (*canonical) return emit(cmd_canonical(matrix_from_json(read_json_file(input)), g.tol), g);
    if (*lift)
      return emit(cmd_lift(model_from_json(read_json_file(model_s)), model_from_json(read_json_file(model_t)), g.seed,
                           g.tol, extension == "ambient" ? ExtensionMode::Ambient : ExtensionMode::ReducingSpan),
                  g);
    if (*explain) return emit(cmd_explain(parse_domain(domain)), g);
  } catch (const cartan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cartan::exit_code::kBadInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error [ParseError]: " << e.what() << "\n";
    return cartan::exit_code::kBadInput;
  }
  return cartan::exit_code::kBadInput;
}
