// Command-line driver: builds the explicit sigmoid-network approximants,
// evaluates serialized networks, runs convergence sweeps with report files,
// and runs the named verification suites.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signet/harness.hpp"

namespace {

using namespace signet;

std::vector<ld> parse_csv_point(const std::string& csv) {
  std::vector<ld> x;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (cur.empty()) throw std::invalid_argument("empty coordinate in --x");
      x.push_back(std::strtold(cur.c_str(), nullptr));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return x;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> v;
  std::string cur;
  for (char c : csv + ",") {
    if (c == ',') {
      if (cur.empty()) throw std::invalid_argument("empty entry in --M-list");
      v.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return v;
}

// The desk-scale envelope: beyond it the steep-unit read-outs cancel far
// below standard resolution, so an explicit extended precision is required.
int check_envelope(int d, int M, const Precision& prec) {
  if ((M > 8 || d > 2) && !prec.extended) {
    std::fprintf(stderr,
                 "refusing d=%d, M=%d at standard precision: stored "
                 "coefficients grow past standard-float resolution.\n"
                 "Pass --precision BITS or set SIGNET_PRECISION to proceed.\n",
                 d, M);
    return 2;
  }
  return 0;
}

int cmd_build(const std::string& func, int M, int d_opt, unsigned bits,
              const std::string& out) {
  const SmoothFunction f = corpus_function(func);
  if (d_opt != 0 && d_opt != f.d) {
    std::fprintf(stderr, "--d %d does not match function '%s' (d=%d)\n", d_opt,
                 func.c_str(), f.d);
    return 2;
  }
  const Precision prec =
      bits > 0 ? Precision::with_bits(bits) : Precision::from_env();
  if (const int rc = check_envelope(f.d, M, prec)) return rc;
  const Network net = build_theorem1(f, M);
  std::printf("built %s M=%d: depth %d, width %d (claimed %lld x %lld), "
              "coefficients %lld, max |weight| %.6Lg\n",
              func.c_str(), M, net.depth(), net.max_hidden_width(),
              net.claimed_depth, net.claimed_width,
              static_cast<long long>(net.params.at("claim_params")),
              net.max_abs_weight());
  for (const std::string& flag : net.flags)
    std::printf("  flag: %s\n", flag.c_str());
  if (!out.empty()) {
    save_network(net, out);
    std::printf("saved to %s\n", out.c_str());
  }
  return 0;
}

int cmd_eval(const std::string& net_path, const std::string& xcsv,
             unsigned bits) {
  const Network net = load_network(net_path);
  const std::vector<ld> x = parse_csv_point(xcsv);
  if (static_cast<int>(x.size()) != net.input_dim) {
    std::fprintf(stderr, "--x has %zu coordinates; network expects %d\n",
                 x.size(), net.input_dim);
    return 2;
  }
  const Precision prec =
      bits > 0 ? Precision::with_bits(bits) : Precision::from_env();
  const PlannedEvaluator eval(net, prec);
  const ld value = eval(x);
  if (eval.plan.overflow)
    std::printf("note: standard precision cannot resolve this network; "
                "evaluated with %u mantissa bits\n", eval.plan.bits);
  std::printf("%.18Lg\n", value);
  return 0;
}

int cmd_sweep(const std::string& func, const std::string& mlist,
              const std::string& region, unsigned bits,
              const std::string& report_path) {
  SweepSpec spec;
  spec.function_name = func;
  spec.M_values = parse_int_list(mlist);
  const SmoothFunction f = corpus_function(func);
  spec.d = f.d;
  spec.p = f.p();
  spec.q = f.q;
  spec.a = f.a;
  spec.precision = bits > 0 ? Precision::with_bits(bits) : Precision::from_env();
  spec.region = region_from_name(region);
  spec.validate();
  for (int M : spec.M_values)
    if (const int rc = check_envelope(spec.d, M, spec.precision)) return rc;

  const RateReport report = run_sweep(spec);
  std::printf("sweep %s (d=%d, p=%g, region %s):\n", func.c_str(), spec.d,
              spec.p, region.c_str());
  for (const PerMRecord& m : report.per_M) {
    std::printf("  M=%d  sup error %-12.5g L=%lld r=%lld W0=%lld max|w| %.3g",
                m.M, m.sup_error, m.L, m.r, m.W0, m.max_weight);
    for (const std::string& fl : m.flags) std::printf(" [%s]", fl.c_str());
    std::printf("\n");
  }
  std::printf("  slope %.4f  fitted c %.6g\n", report.slope, report.fitted_c);
  if (!report_path.empty()) {
    save_report(report, report_path);
    std::printf("report written to %s\n", report_path.c_str());
  }
  return 0;
}

int cmd_verify(const std::string& id) {
  std::vector<std::string> ids;
  if (id == "all")
    ids = lemma_suite_ids();
  else
    ids.push_back(id);
  bool all_pass = true;
  for (const std::string& suite : ids) {
    const SuiteReport rep = run_lemma_suite(suite);
    std::fputs(rep.to_string().c_str(), stdout);
    std::fflush(stdout);
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_norms() {
  const SigmoidNorms& n = sigmoid_norms();
  std::printf("sup |sigma'|   = %.12Lg\n", n.d1_max);
  std::printf("sup |sigma''|  = %.12Lg\n", n.d2_max);
  std::printf("sup |sigma'''| = %.12Lg\n", n.d3_max);
  std::printf("sup |sigma''''|= %.12Lg\n", n.d4_max);
  std::printf("product anchor t = %.21Lg\n", t_mult_anchor());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit sigmoid-network approximants: build, evaluate, "
               "sweep, verify"};
  app.require_subcommand(1);

  std::string func, out, net_path, xcsv, mlist = "2,3,4,5,6";
  std::string region = "theorem1-certified", report_path, suite_id;
  int M = 2, d_opt = 0;
  unsigned bits = 0;

  CLI::App* build = app.add_subcommand("build", "construct one approximant");
  build->add_option("--func", func, "corpus function name")->required();
  build->add_option("--M", M, "grid parameter (M >= 2)")->required();
  build->add_option("--d", d_opt, "expected input dimension (validated)");
  build->add_option("--precision", bits, "extended mantissa bits (>= 64)");
  build->add_option("--out", out, "write the network to this JSON file");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a saved network");
  eval->add_option("--net", net_path, "network JSON file")->required();
  eval->add_option("--x", xcsv, "comma-separated input point")->required();
  eval->add_option("--precision", bits, "extended mantissa bits (>= 64)");

  CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep over M");
  sweep->add_option("--func", func, "corpus function name")->required();
  sweep->add_option("--M-list", mlist, "comma-separated increasing M values");
  sweep->add_option("--region", region,
                    "theorem1-certified | inner-cubes | full-domain");
  sweep->add_option("--precision", bits, "extended mantissa bits (>= 64)");
  sweep->add_option("--report", report_path, "write report (.json or .csv)");

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--lemma,--suite", suite_id,
                     "suite id (L1 L2 L3 L4 L6 L8 L9 L10 L11 L12 T1-arch "
                     "T1-rate PoU) or 'all'")
      ->required();

  app.add_subcommand("norms", "print activation derivative norms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(func, M, d_opt, bits, out);
    if (eval->parsed()) return cmd_eval(net_path, xcsv, bits);
    if (sweep->parsed()) return cmd_sweep(func, mlist, region, bits, report_path);
    if (verify->parsed()) return cmd_verify(suite_id);
    return cmd_norms();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
