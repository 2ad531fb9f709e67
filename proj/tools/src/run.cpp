#include "ontoqubit_cli/run.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ontoqubit/errors.hpp"
#include "ontoqubit_cli/commands.hpp"

namespace ontoqubit::cli {

namespace {

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw UsageError("not a number: '" + text + "'");
  return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const double v = parse_number(item);
    if constexpr (std::is_integral_v<T>) {
      if (v != std::floor(v)) throw UsageError("expected an integer: '" + item + "'");
    }
    out.push_back(static_cast<T>(v));
  }
  return out;
}

struct Common {
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, Common& c, bool seed_required) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output,-o", c.output, "Output path (stdout when absent)");
  auto* seed = sub->add_option("--seed", c.seed, "Random seed");
  if (seed_required) seed->required();
}

}  // namespace

double parse_angle(const std::string& text) {
  constexpr std::string_view kDeg = "deg";
  if (text.size() > kDeg.size() && text.compare(text.size() - kDeg.size(), kDeg.size(), kDeg) == 0) {
    return parse_number(text.substr(0, text.size() - kDeg.size())) * kPi / 180.0;
  }
  return parse_number(text);
}

double parse_information(const std::string& text) {
  if (text.rfind("ln", 0) == 0) {
    const double x = parse_number(text.substr(2));
    if (!(x > 0.0)) throw UsageError("log argument must be positive: '" + text + "'");
    return std::log(x);
  }
  return parse_number(text);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ontoqubit"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden-variable qubit model verification suites"};
  app.name("ontoqubit");
  app.require_subcommand(1, 1);
  Common common;

  BornOptions born;
  auto* born_cmd = app.add_subcommand("verify-born", "Born identity sweep over the validity cone");
  born_cmd->add_option("--grid", born.grid, "States and events per axis")->check(CLI::Range(2, 100000));
  add_common(born_cmd, common, false);

  SampleOptions smp;
  auto* sample_cmd = app.add_subcommand("sample", "Monte-Carlo weak simulation against the Born rule");
  sample_cmd->add_option("--pairs", smp.pairs, "Number of random (v, w) pairs")->check(CLI::Range(1, 100000));
  sample_cmd->add_option("--samples", smp.samples, "Samples per pair")->check(CLI::Range(1LL, 1'000'000'000LL));
  sample_cmd->add_option("--sigma", smp.sigma, "Tolerance in binomial standard deviations");
  add_common(sample_cmd, common, true);

  RegionCliOptions reg;
  std::string reg_theta0 = "90deg";
  auto* region_cmd = app.add_subcommand("region", "Positivity region of a family member");
  region_cmd->add_option("--theta0", reg_theta0, "Family angle theta0 (radians, or with a deg suffix)");
  region_cmd->add_option("--s", reg.s, "Family parameter s");
  region_cmd->add_option("--resolution", reg.resolution, "Side of the (theta, phi) map")->check(CLI::Range(2, 4096));
  add_common(region_cmd, common, false);

  PatchOptions pat;
  auto* patch_cmd = app.add_subcommand("patches", "Full-sphere patch model checks");
  patch_cmd->add_option("--pairs", pat.pairs, "Random (v, w) pairs")->check(CLI::Range(1, 10'000'000));
  patch_cmd->add_option("--orthogonal", pat.orthogonal, "Random states for the orthogonal event")
      ->check(CLI::Range(1, 10'000'000));
  add_common(patch_cmd, common, true);

  NonMarkovOptions nm;
  bool no_refine = false;
  auto* nm_cmd = app.add_subcommand("nonmarkov", "Stochastic kernel fits for rotations of the ontic grid");
  nm_cmd->add_option("--g0", nm.g0, "Azimuthal grid size")->check(CLI::Range(8, 4096));
  nm_cmd->add_option("--g1", nm.g1, "Zenithal grid size")->check(CLI::Range(8, 4096));
  nm_cmd->add_option("--budget", nm.budget, "Solver iteration budget")->check(CLI::Range(1, 100'000'000));
  nm_cmd->add_option("--n-theta", nm.n_theta, "Ensemble zenith count")->check(CLI::Range(1, 1024));
  nm_cmd->add_option("--n-phi", nm.n_phi, "Ensemble azimuth count")->check(CLI::Range(1, 1024));
  nm_cmd->add_flag("--no-refine", no_refine, "Skip the doubled-grid sigma_y fit");
  add_common(nm_cmd, common, false);

  GroupOptions grp;
  auto* group_cmd = app.add_subcommand("group", "Lie closure, orbit connectivity and dimension counting");
  group_cmd->add_option("--states", grp.states, "Haar-random states for the orbit search")->check(CLI::Range(0, 100000));
  group_cmd->add_option("--n", grp.n, "Hilbert dimension N for the shrinking margin")->check(CLI::Range(2, 1 << 20));
  group_cmd->add_option("--m", grp.m, "Ontic dimension M for the shrinking margin")->check(CLI::Range(0, 1 << 30));
  add_common(group_cmd, common, true);

  ResourceOptions res;
  std::string res_g = "1,4";
  std::string res_info = "ln100";
  std::string res_ns = "16,32,64,128,256,512,1024";
  std::string res_theta0 = "1.0";
  auto* res_cmd = app.add_subcommand("resource", "Grid allocation under an information budget");
  res_cmd->add_option("--g", res_g, "Comma-separated mean gradients");
  res_cmd->add_option("--info", res_info, "Information budget in nats, or lnX");
  res_cmd->add_option("--model", res.model, "Model for the round-off table")->check(CLI::IsMember({"base", "family"}));
  res_cmd->add_option("--theta0", res_theta0, "Family angle for --model family");
  res_cmd->add_option("--s", res.s, "Family parameter for --model family");
  res_cmd->add_option("--ns", res_ns, "Comma-separated grid counts (empty skips the table)");
  res_cmd->add_option("--budget", res.budget, "Integer search budget (default floor(e^I))");
  res_cmd->add_option("--n-max", res.n_max, "Integer search cap per dimension");
  add_common(res_cmd, common, false);

  FamilyCheckOptions fam;
  std::string fam_theta0;
  std::string fam_s;
  auto* fam_cmd = app.add_subcommand("family-check", "Algebraic identities of the two-delta family");
  fam_cmd->add_option("--theta0", fam_theta0, "Family angle (default: the standard parameter set)");
  fam_cmd->add_option("--s", fam_s, "Family parameter s");
  fam_cmd->add_option("--grid", fam.grid, "Points per coordinate axis")->check(CLI::Range(4, 4096));
  add_common(fam_cmd, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  Report report;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (*born_cmd) {
      born.seed = common.seed;
      report = verify_born(born);
    } else if (*sample_cmd) {
      smp.seed = common.seed;
      report = sample(smp);
    } else if (*region_cmd) {
      reg.theta0 = parse_angle(reg_theta0);
      report = region(reg);
    } else if (*patch_cmd) {
      pat.seed = common.seed;
      report = patches(pat);
    } else if (*nm_cmd) {
      nm.seed = common.seed;
      nm.refine = !no_refine;
      report = nonmarkov(nm);
    } else if (*group_cmd) {
      grp.seed = common.seed;
      report = group(grp);
    } else if (*res_cmd) {
      res.g = parse_list<double>(res_g);
      res.information = parse_information(res_info);
      res.ns = res_ns.empty() ? std::vector<int>{} : parse_list<int>(res_ns);
      res.theta0 = parse_angle(res_theta0);
      report = resource(res);
    } else if (*fam_cmd) {
      if (fam_theta0.empty() != fam_s.empty()) throw UsageError("--theta0 and --s must be given together");
      if (!fam_theta0.empty()) fam.params.emplace_back(parse_angle(fam_theta0), parse_number(fam_s));
      fam.seed = common.seed;
      report = family_check(fam);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "outside the model's domain: " << e.what() << '\n';
    return kExitUsage;
  }
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report.config["format"] = common.format;

  try {
    emit_report(report, common.format == "csv" ? Format::kCsv : Format::kJson, common.output, out);
  } catch (const std::runtime_error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return report.pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace ontoqubit::cli
