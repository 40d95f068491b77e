#include "cli/run.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <functional>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "cli/suites.hpp"
#include "gausschan/error.hpp"
#include "gausschan/seeding.hpp"

namespace gausschan::cli {

namespace {

struct Options {
  double tol = ToleranceConfig{}.residual_tol;
  double eig_tol = ToleranceConfig{}.eig_tol;
  double eps = ToleranceConfig{}.reg_eps;
  std::uint64_t seed = 0;
  std::size_t samples = 0;  // 0: command default
  int restarts = DecideOptions{}.search.restarts;
  int iters = DecideOptions{}.search.iters;
  int d = 1;
  std::string out;
  bool json_report = false;
  std::vector<std::string> files;

  ToleranceConfig cfg() const {
    ToleranceConfig c;
    c.residual_tol = tol;
    c.eig_tol = eig_tol;
    c.reg_eps = eps;
    return c;
  }
  std::size_t samples_or(std::size_t fallback) const { return samples > 0 ? samples : fallback; }
};

// Anything that is the caller's fault rather than the data's.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  int code = kOk;
  std::string verdict;
  json results = json::object();
  json output;  // file payload, also written to --out
};

struct Context {
  Options opt;
  ToleranceConfig cfg;
  std::uint64_t inputs_digest = fnv1a("");

  json load(std::size_t index) {
    if (index >= opt.files.size()) throw UsageError("missing input file argument");
    const std::string& path = opt.files[index];
    const std::string text = read_file(path);
    inputs_digest = fnv1a(text, fnv1a(std::to_string(text.size()), inputs_digest));
    return parse_json(text, path);
  }
  ChannelParams channel(std::size_t index) { return channel_from_json(load(index), cfg); }
};

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

json validity_json(const ValidityReport& v) {
  return json{{"valid", v.valid},
              {"min_eig", std::min(v.min_eig_minus, v.min_eig_plus)},
              {"min_eig_minus", v.min_eig_minus},
              {"min_eig_plus", v.min_eig_plus},
              {"y_min_eig", v.y_min_eig},
              {"scale", v.scale}};
}

Outcome cmd_check(Context& ctx) {
  const auto ch = ctx.channel(0);
  const auto v = validity(ch, ctx.cfg);
  Outcome o;
  o.verdict = v.valid ? "valid" : "invalid";
  o.results = validity_json(v);
  o.results["fd0_member"] = fd0_member(ch.x, ch.y, ch.form, ctx.cfg);
  o.results["fd_sufficient"] = fd_sufficient(ch.y, ch.form, ctx.cfg);
  o.code = v.valid ? kOk : kNegative;
  return o;
}

Outcome cmd_evolve(Context& ctx) {
  const auto ch = ctx.channel(0);
  const auto st = state_from_json(ctx.load(1), ctx.cfg);
  if (st.form() != ch.form) throw InputError("state and channel have different mode counts");
  Outcome o;
  const auto v = validity(ch, ctx.cfg);
  o.results["validity"] = validity_json(v);
  if (!v.valid) {
    o.verdict = "invalid";
    o.code = kNegative;
    return o;
  }
  const auto outst = apply(ch, st, ctx.cfg);
  o.verdict = "ok";
  o.results["output_min_eig"] = is_admissible_cov(outst.cov(), outst.form(), ctx.cfg).min_eig;
  o.output = state_to_json(outst);
  return o;
}

Outcome cmd_dilate(Context& ctx) {
  const auto ch = ctx.channel(0);
  Outcome o;
  const auto v = validity(ch, ctx.cfg);
  if (!v.valid) {
    o.verdict = "invalid";
    o.results["validity"] = validity_json(v);
    o.code = kNegative;
    return o;
  }
  const auto built = build_dilation(ch, ctx.cfg);
  const auto& diag = built.diagnostics;
  o.verdict = "ok";
  o.results = json{{"symplectic_residual", diag.symplectic_residual},
                   {"y_residual", diag.l21.y_residual},
                   {"k_residual", diag.l21.k_residual},
                   {"regularized", diag.l21.regularized},
                   {"reg_shift", diag.l21.reg_shift},
                   {"max_d", diag.l21.max_d},
                   {"recovery", channel_distance(induced_channel(built.dilation), ch)}};
  o.output = dilation_to_json(built.dilation);
  return o;
}

Outcome cmd_verify(Context& ctx) {
  const auto dil = dilation_from_json(ctx.load(0));
  const auto ch = ctx.channel(1);
  if (dil.d_in != ch.modes()) throw InputError("dilation d_in does not match channel d");
  const std::size_t n = ctx.opt.samples_or(20);
  const double dev = verify_dilation(dil, ch, n, ctx.opt.seed, ctx.cfg, worker_count());
  Outcome o;
  o.results = json{{"deviation", dev},
                   {"states", n},
                   {"symplectic_residual", symplectic_residual(dil.g, dil.form())}};
  o.verdict = dev <= ctx.cfg.residual_tol ? "ok" : "deviation_exceeds_tol";
  o.code = dev <= ctx.cfg.residual_tol ? kOk : kNegative;
  return o;
}

Outcome cmd_interferometer(Context& ctx) {
  const auto ch = ctx.channel(0);
  DecideOptions opts;
  opts.search.restarts = ctx.opt.restarts;
  opts.search.iters = ctx.opt.iters;
  opts.search.seed = ctx.opt.seed;
  const auto dec = decide(ch, opts, ctx.cfg);
  Outcome o;
  o.verdict = std::string(to_string(dec.status));
  o.results = json{{"status", to_string(dec.status)},
                   {"reason", to_string(dec.reason)},
                   {"symmetry_residual", dec.symmetry_residual},
                   {"restarts_run", dec.restarts_run}};
  if (dec.status == DecisionStatus::Yes) {
    o.results["induced_deviation"] = dec.induced_deviation;
    o.results["orthosymplectic_residual"] = orthosymplectic_residual(*dec.l_inv);
    o.results["Q"] = matrix_to_json(*dec.q);
    o.output = dilation_to_json(interferometer_dilation(*dec.l_inv));
  }
  o.code = dec.status == DecisionStatus::Yes ? kOk : dec.status == DecisionStatus::No ? kNegative : kUndecided;
  return o;
}

Outcome cmd_compose(Context& ctx) {
  const auto first = ctx.channel(0);
  const auto second = ctx.channel(1);
  if (first.form != second.form) throw InputError("channels have different mode counts");
  const auto both = compose(first, second);
  const bool inputs_valid = validity(first, ctx.cfg).valid && validity(second, ctx.cfg).valid;
  Outcome o;
  o.results = json{{"inputs_valid", inputs_valid}, {"validity", validity_json(validity(both, ctx.cfg))}};
  o.verdict = inputs_valid ? "ok" : "invalid";
  o.code = inputs_valid ? kOk : kNegative;
  o.output = channel_to_json(both);
  return o;
}

Outcome cmd_modes(Context& ctx) {
  const auto ch = ctx.channel(0);
  const auto v = validity(ch, ctx.cfg);
  Outcome o;
  o.results["validity"] = validity_json(v);
  if (!v.valid) {
    o.verdict = "invalid";
    o.code = kNegative;
    return o;
  }
  o.verdict = "ok";
  o.results["env_mode_bound"] = env_mode_bound(ch, ctx.cfg);
  o.results["bound_kind"] = "upper";
  return o;
}

Outcome cmd_counterexample(Context& ctx) {
  const auto rep = fd_counterexample(ctx.opt.d, ctx.cfg);
  const auto fd = fd_member_sample(rep.channel.x, rep.channel.y, rep.channel.form, ctx.opt.samples_or(500),
                                   ctx.opt.seed, ctx.cfg, worker_count());
  Outcome o;
  o.results = json{{"validity", validity_json(rep.validity)},
                   {"fd0_member", rep.fd0_member},
                   {"fd_sufficient", rep.fd_sufficient},
                   {"fd_sample_verdict", fd.verdict == FdVerdict::Falsified ? "falsified" : "not_falsified"},
                   {"fd_samples", fd.samples}};
  o.verdict = rep.validity.valid ? "valid" : "invalid";
  o.output = channel_to_json(rep.channel);
  return o;
}

Outcome cmd_transpose_map(Context& ctx) {
  const auto ch = transpose_map_params(ctx.opt.d);
  Outcome o;
  const auto v = validity(ch, ctx.cfg);
  o.results["validity"] = validity_json(v);
  o.verdict = v.valid ? "valid" : "invalid";
  o.output = channel_to_json(ch);
  return o;
}

// Acceptance suites at reduced sample counts; thresholds match the full
// acceptance run.
Outcome cmd_selftest(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::uint64_t seed = ctx.opt.seed;
  const unsigned workers = worker_count();
  const std::size_t scale = ctx.opt.samples_or(1);
  json suites = json::object();
  bool all = true;
  auto add = [&](const std::string& name, bool pass, json metrics) {
    metrics["pass"] = pass;
    suites[name] = std::move(metrics);
    all = all && pass;
  };

  {
    const auto m = counterexample_suite({1, 2, 3}, 100 * scale, derive_seed(seed, 1), cfg, workers);
    add("counterexample",
        m.worst_min_eig_gap <= 1e-9 && m.worst_spectrum_gap <= 1e-9 && !m.any_fd0_member && m.all_fd_sufficient &&
            !m.any_falsified,
        json{{"min_eig_gap", m.worst_min_eig_gap}, {"spectrum_gap", m.worst_spectrum_gap},
             {"fd0_member", m.any_fd0_member}, {"falsified", m.any_falsified}, {"samples", m.samples}});
  }
  {
    const auto m = transpose_map_suite({1, 2, 3}, cfg);
    add("transpose_map", m.worst_min_eig_gap <= 1e-9 && !m.any_valid,
        json{{"min_eig_gap", m.worst_min_eig_gap}, {"any_valid", m.any_valid}});
  }
  {
    json per_d = json::object();
    bool pass = true;
    for (int d = 1; d <= 3; ++d) {
      const auto m = roundtrip_suite(d, 10 * scale, 5, derive_seed(seed, 10 + d), cfg, workers);
      pass = pass && m.errors == 0 && m.worst_recovery <= 1e-8 && m.worst_symplectic <= 1e-8 &&
             m.worst_verify <= 1e-8;
      per_d[std::to_string(d)] = json{{"cases", m.cases}, {"errors", m.errors}, {"recovery", m.worst_recovery},
                                      {"symplectic", m.worst_symplectic}, {"verify", m.worst_verify}};
    }
    add("dilation_roundtrip", pass, per_d);
  }
  {
    const auto m = singular_roundtrip_suite(6 * scale, 6 * scale, 5, derive_seed(seed, 20), cfg, workers);
    add("dilation_singular", m.errors == 0 && m.worst_recovery <= 1e-6,
        json{{"cases", m.cases}, {"errors", m.errors}, {"recovery", m.worst_recovery},
             {"symplectic", m.worst_symplectic}, {"verify", m.worst_verify}});
  }
  {
    const auto m = transpose_equivalence_suite(100 * scale, derive_seed(seed, 30), cfg);
    add("transpose_equivalence", m.worst_scaled_gap <= 1e-9,
        json{{"cases", m.cases}, {"valid_cases", m.valid_cases}, {"scaled_gap", m.worst_scaled_gap}});
  }
  {
    DecideOptions opts;
    opts.search.seed = derive_seed(seed, 41);
    const auto m = interferometer_suite(5, 6 * scale, derive_seed(seed, 40), opts, cfg);
    const bool pass = m.attenuator_yes == m.attenuator_cases && m.passive_yes == m.passive_cases &&
                      m.worst_orthosymplectic <= 1e-8 && m.worst_induced <= 1e-8 &&
                      m.half_identity.status == DecisionStatus::No &&
                      m.trace_failing.status == DecisionStatus::No &&
                      m.trace_failing.reason == DecisionReason::TraceConditionFailed &&
                      m.counterexample.status == DecisionStatus::No &&
                      m.counterexample.reason == DecisionReason::InvalidChannel;
    add("interferometer", pass,
        json{{"attenuator", std::to_string(m.attenuator_yes) + "/" + std::to_string(m.attenuator_cases)},
             {"passive", std::to_string(m.passive_yes) + "/" + std::to_string(m.passive_cases)},
             {"orthosymplectic", m.worst_orthosymplectic}, {"induced", m.worst_induced},
             {"half_identity", to_string(m.half_identity.reason)},
             {"trace_failing", to_string(m.trace_failing.reason)},
             {"counterexample", to_string(m.counterexample.reason)}});
  }
  {
    const auto m = composition_suite(20 * scale, 3, derive_seed(seed, 50), cfg);
    add("composition", m.worst_deviation <= 1e-9 && m.all_valid,
        json{{"cases", m.cases}, {"deviation", m.worst_deviation}, {"all_valid", m.all_valid}});
  }
  {
    const auto m = env_mode_suite(derive_seed(seed, 60), cfg);
    add("env_modes", m.identity == 0 && m.unitary == 0 && m.attenuator == 2,
        json{{"identity", m.identity}, {"unitary", m.unitary}, {"attenuator", m.attenuator}});
  }

  Outcome o;
  o.results = std::move(suites);
  o.verdict = all ? "pass" : "fail";
  o.code = all ? kOk : kNegative;
  return o;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void print_human(std::ostream& out, const std::string& command, const Outcome& o, const json& report) {
  out << command << ": " << o.verdict << "\n";
  std::function<void(const json&, const std::string&)> walk = [&](const json& j, const std::string& prefix) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    } else if (!(j.is_array() && !j.empty() && j.front().is_array())) {
      out << "  " << prefix << " = " << j.dump() << "\n";
    }
  };
  walk(o.results, "");
  out << "  inputs_digest = " << report["inputs_digest"].get<std::string>() << "\n";
}

}  // namespace

json strip_volatile(json report) {
  report.erase("timestamp");
  report.erase("report_digest");
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian channel certification, dilation and interferometer synthesis", "gausschan"};
  app.require_subcommand(1);
  Options opt;

  struct Entry {
    const char* name;
    const char* help;
    std::vector<const char*> files;
    Outcome (*fn)(Context&);
  };
  const std::vector<Entry> entries = {
      {"check", "Validity report for a channel (exit 2 when invalid)", {"channel"}, cmd_check},
      {"evolve", "Apply a channel to a state", {"channel", "state"}, cmd_evolve},
      {"dilate", "Build a Stinespring dilation of a channel", {"channel"}, cmd_dilate},
      {"verify", "Compare a dilation against a channel on random states", {"dilation", "channel"}, cmd_verify},
      {"interferometer", "Decide passive (interferometer) implementability", {"channel"}, cmd_interferometer},
      {"compose", "Compose two channels, first then second", {"first", "second"}, cmd_compose},
      {"modes", "Upper bound on the environment modes needed", {"channel"}, cmd_modes},
      {"counterexample", "Emit the F_d vs F_d^0 counterexample with its report", {}, cmd_counterexample},
      {"transpose-map", "Emit the transpose-map parameters with a validity report", {}, cmd_transpose_map},
      {"selftest", "Run the property suites at reduced sample counts", {}, cmd_selftest},
  };

  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--tol", opt.tol, "Residual tolerance")->capture_default_str();
    sub->add_option("--eig-tol", opt.eig_tol, "Relative eigenvalue tolerance")->capture_default_str();
    sub->add_option("--eps", opt.eps, "Regularization base for singular Y")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Root seed")->capture_default_str();
    sub->add_option("--samples", opt.samples, "Sample count (0: command default)");
    sub->add_option("--restarts", opt.restarts, "find_q restarts")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--iters", opt.iters, "find_q iterations per restart")->capture_default_str()->check(
        CLI::NonNegativeNumber);
    sub->add_option("--out", opt.out, "Write the produced file here");
    sub->add_flag("--json", opt.json_report, "Machine-readable report on stdout");
    if (e.files.empty() && std::string(e.name) != "selftest") {
      sub->add_option("-d,--modes", opt.d, "Number of modes")->capture_default_str()->check(CLI::Range(1, 1000));
    }
    if (!e.files.empty()) {
      sub->add_option("files", opt.files, "Input files")->required()->expected(static_cast<int>(e.files.size()));
    }
    subs.emplace_back(sub, &e);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  const Entry* chosen = nullptr;
  for (const auto& [sub, e] : subs) {
    if (sub->parsed()) chosen = e;
  }
  if (chosen == nullptr) {
    err << "no subcommand\n";
    return kUsage;
  }

  Context ctx{opt, opt.cfg()};
  try {
    ctx.cfg.validate();
  } catch (const Error& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  }
  Outcome outcome;
  try {
    outcome = chosen->fn(ctx);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "malformed input: " << e.what() << "\n";
    return kDataErr;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidChannel) {
      err << e.what() << "\n";
      return kNegative;
    }
    if (e.kind() == ErrorKind::Structural && !ctx.opt.files.empty()) {
      err << "malformed input: " << e.what() << "\n";
      return kDataErr;
    }
    err << "internal: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << "\n";
    return kInternal;
  }

  json report = json::object();
  report["command"] = chosen->name;
  report["argv"] = args;
  report["inputs_digest"] = hex64(ctx.inputs_digest);
  report["verdict"] = outcome.verdict;
  report["exit_code"] = outcome.code;
  report["results"] = outcome.results;
  report["tolerances"] = json{{"residual_tol", ctx.cfg.residual_tol},
                              {"eig_tol", ctx.cfg.eig_tol},
                              {"reg_eps", ctx.cfg.reg_eps}};
  report["seed"] = opt.seed;
  report["version"] = GAUSSCHAN_VERSION;
  if (!outcome.output.is_null()) report["output"] = outcome.output;
  report["report_digest"] = hex64(fnv1a(report.dump()));
  report["timestamp"] = utc_timestamp();

  try {
    if (!opt.out.empty()) {
      if (outcome.output.is_null()) {
        err << "note: " << chosen->name << " produced no file; --out ignored\n";
      } else {
        write_file(opt.out, dump(outcome.output));
      }
    }
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << "\n";
    return kInternal;
  }

  if (opt.json_report) {
    out << dump(report);
  } else {
    print_human(out, chosen->name, outcome, report);
  }
  return outcome.code;
}

}  // namespace gausschan::cli
