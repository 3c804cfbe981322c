#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "streamcode/blockcodes.hpp"
#include "streamcode/channel.hpp"
#include "streamcode/conformance.hpp"
#include "streamcode/serialize.hpp"
#include "streamcode/streaming.hpp"

namespace streamcode::cli {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::optional<int> N, B, W, T;
  std::string construction = "auto";
  std::optional<std::size_t> horizon;
  std::uint64_t seed = 0;
  double burst_bias = 0.5;
  std::string pattern_file;
  std::string in;
  std::string out;
  bool verbose = false;
};

struct Model {
  int N, B, T;
  std::optional<int> W;
};

Model require_model(const RunConfig& c) {
  if (!c.N || !c.B || !c.T) throw UsageError("--N, --B and --T are required");
  check_feasible(*c.N, *c.B, c.W, *c.T);
  return {*c.N, *c.B, *c.T, c.W};
}

BlockCode build(const RunConfig& c, const Model& m) {
  if (c.construction == "auto") return construct_auto(m.N, m.B, m.W, m.T);
  return construct(construction_from_string(c.construction), m.N, m.B, m.W, m.T);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write to " + path + " failed");
}

std::string describe(const BlockCode& code) {
  std::ostringstream os;
  os << "construction " << to_string(code.construction) << ", field size " << code.field->order() << ", n=" << code.n()
     << ", k=" << code.k() << ", rate " << code.rate().to_string();
  return os.str();
}

int cmd_bound(const RunConfig& c, std::ostream& out) {
  const auto m = require_model(c);
  const auto r = rate_upper_bound(m.N, m.B, m.W, m.T);
  out << r.to_string() << " ≈ " << std::fixed << std::setprecision(6) << r.value()
      << " (T_eff=" << effective_delay(m.T, m.W) << ")\n";
  return kExitOk;
}

int cmd_construct(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto m = require_model(c);
  const auto code = build(c, m);
  const auto dump = serialize::dump_code(code);
  if (c.out.empty()) {
    // the dump owns stdout so it can be piped
    err << describe(code) << '\n';
    out << dump;
  } else {
    write_file(c.out, dump);
    out << describe(code) << '\n' << "wrote " << c.out << '\n';
  }
  return kExitOk;
}

std::string format_set(const std::vector<std::size_t>& s) {
  std::string r = "{";
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + "}";
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  BlockCode code;
  Model m{};
  if (!c.in.empty()) {
    code = serialize::load_code_file(c.in);
    m = {c.N.value_or(code.params.N), c.B.value_or(code.params.B), c.T.value_or(code.params.T),
         c.W ? c.W : code.params.W};
    check_feasible(m.N, m.B, m.W, m.T);
  } else {
    m = require_model(c);
    code = build(c, m);
  }
  const int te = effective_delay(m.T, m.W);
  const auto rep = conformance::conforms(code, m.N, m.B, te);
  if (!c.out.empty()) write_file(c.out, serialize::report_to_json(rep).dump(2) + "\n");

  out << (rep.pass ? "PASS" : "FAIL") << ": " << describe(code) << " against C(" << m.N << "," << m.B << ",";
  if (m.W) out << *m.W;
  else out << "-";
  out << ") with delay " << te << '\n';
  if (!rep.reason.empty()) out << "reason: " << rep.reason << '\n';
  out << "checked " << rep.isolated_checked << " isolated and " << rep.burst_checked << " burst erasure sets\n";
  if (!rep.pass && rep.reason.empty()) {
    out << rep.violation_count << " violation(s)";
    if (rep.violations.size() < rep.violation_count) out << ", first " << rep.violations.size() << " listed";
    out << '\n';
    for (const auto& v : rep.violations)
      out << "  coordinate " << v.coordinate << " not recoverable, " << conformance::to_string(v.clause)
          << " erasure " << format_set(v.erased) << '\n';
  }
  return rep.pass ? kExitOk : kExitFail;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  const auto m = require_model(c);
  const int model_w = m.W.value_or(effective_delay(m.T, m.W) + 1);
  channel::ErasurePattern pattern;
  if (!c.pattern_file.empty()) {
    pattern = channel::load_pattern_file(c.pattern_file);
    if (c.horizon && *c.horizon != pattern.horizon)
      throw UsageError("--horizon " + std::to_string(*c.horizon) + " disagrees with the pattern file's horizon " +
                       std::to_string(pattern.horizon));
  } else {
    pattern = channel::random_pattern(m.N, m.B, model_w, c.horizon.value_or(200), c.seed, c.burst_bias);
  }
  const auto code = build(c, m);
  streaming::SimulationOptions opts;
  opts.declared_model = std::make_tuple(m.N, m.B, model_w);
  const auto rep = streaming::run_simulation(code, pattern, c.seed, opts);

  if (!c.out.empty()) {
    write_file(c.out + ".csv", streaming::report_csv(rep));
    write_file(c.out + ".json", streaming::report_summary_json(rep) + "\n");
  }
  out << describe(code) << '\n';
  out << "horizon " << rep.horizon << ", erased packets " << pattern.erased.size() << ", erased symbols "
      << rep.erased_symbols.size() << '\n';
  out << "max_delay " << rep.max_delay << ", failures " << rep.failures << ", late " << rep.late << ", mismatches "
      << rep.mismatches << '\n';
  if (c.verbose) {
    for (const auto& r : rep.erased_symbols) {
      out << "  t=" << r.time << " coord=" << r.coord << ' ' << streaming::to_string(r.status);
      if (r.recovered_at) out << " at " << *r.recovered_at << " delay " << *r.delay();
      out << '\n';
    }
  }
  if (!c.out.empty()) out << "wrote " << c.out << ".csv and " << c.out << ".json\n";
  const bool ok = rep.failures == 0 && rep.late == 0 && rep.mismatches == 0;
  return ok ? kExitOk : kExitFail;
}

void add_model_flags(CLI::App* app, RunConfig& c) {
  app->add_option("--N", c.N, "isolated erasures per window");
  app->add_option("--B", c.B, "burst length");
  app->add_option("--W", c.W, "window width");
  app->add_option("--T", c.T, "decoding delay");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Streaming erasure codes for sliding-window burst and isolated erasures", "streamcode"};
  app.require_subcommand(1);
  app.allow_windows_style_options(false);

  auto* bound = app.add_subcommand("bound", "print the rate upper bound");
  add_model_flags(bound, c);

  auto* construct_cmd = app.add_subcommand("construct", "build a code and dump its generator");
  add_model_flags(construct_cmd, c);
  construct_cmd->add_option("--construction", c.construction, "auto|a|b|mds|a-binary|a-swap");
  construct_cmd->add_option("--out", c.out, "dump path (stdout when absent)");

  auto* verify = app.add_subcommand("verify", "check a code against the channel model");
  add_model_flags(verify, c);
  verify->add_option("--construction", c.construction, "auto|a|b|mds|a-binary|a-swap");
  verify->add_option("--in", c.in, "code dump to check instead of constructing one");
  verify->add_option("--out", c.out, "report JSON path");

  auto* simulate = app.add_subcommand("simulate", "stream random messages through an erasure pattern");
  add_model_flags(simulate, c);
  simulate->add_option("--construction", c.construction, "auto|a|b|mds|a-binary|a-swap");
  simulate->add_option("--horizon", c.horizon, "packets sent (default 200)");
  simulate->add_option("--seed", c.seed, "seed for messages and the sampled pattern");
  simulate->add_option("--burst-bias", c.burst_bias, "probability that a sampled event is a burst");
  simulate->add_option("--pattern-file", c.pattern_file, "erasure pattern (JSON or index list)");
  simulate->add_option("--out", c.out, "writes <out>.csv and <out>.json");
  simulate->add_flag("--verbose", c.verbose, "list every erased symbol");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (bound->parsed()) return cmd_bound(c, out);
    if (construct_cmd->parsed()) return cmd_construct(c, out, err);
    if (verify->parsed()) return cmd_verify(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
  } catch (const streaming::InvalidPattern& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // infeasible parameters, unknown construction, malformed flags
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}

}  // namespace streamcode::cli
