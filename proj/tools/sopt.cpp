// sopt: run oracle machines, check declared resource bounds, manipulate
// second-order polynomial descriptions and drive the gallery adversaries.
//
// Exit codes: 0 pass / halted, 1 verdict fail, 2 usage or malformed input,
// 3 fuel exhausted.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sopt/calibration.hpp"
#include "sopt/gallery.hpp"
#include "sopt/oracle_io.hpp"
#include "sopt/program_io.hpp"
#include "sopt/resources.hpp"
#include "sopt/sampling.hpp"
#include "sopt/sopoly_io.hpp"
#include "sopt/transformers.hpp"

using namespace sopt;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kFuel = 3 };

/// Input problems the user can fix: reported on stderr with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_arg(const std::string& arg) {
  // Inline JSON or a path to a JSON file.
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw UsageError("cannot open " + arg);
  return json::parse(in);
}

Machine load_machine(const std::string& spec) {
  if (spec.rfind("gallery:", 0) == 0) {
    if (auto m = gallery::by_name(spec.substr(8))) return *m;
    throw UsageError("unknown gallery machine: " + spec.substr(8));
  }
  return machine_from_json(read_json_arg(spec));
}

Oracle load_oracle(const std::string& spec) {
  if (auto o = oracle_from_shorthand(spec)) return *o;
  return oracle_from_json(read_json_arg(spec));
}

UniPoly load_unipoly(const std::string& spec) { return unipoly_from_json(read_json_arg(spec)); }
Description load_description(const std::string& spec) { return description_from_json(read_json_arg(spec)); }

Trace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_trace(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json run_report(const Machine& m, const std::string& input, const RunOutcome& r) {
  const auto rev = count_revisions(r.trace);
  return {{"machine", m.name},
          {"input", input},
          {"status", r.halted() ? "halted" : "fuel-exhausted"},
          {"output", r.output},
          {"time", r.trace.time},
          {"queries", r.trace.queries.size()},
          {"revisions", rev.strict_increases},
          {"max_length", cook_m(r.trace)}};
}

int verdict_exit(const Verdict& v) { return v.fail() ? kFail : kOk; }

json bounds_json(const Machine& m) {
  json b = json::object();
  if (m.bounds.step_count) b["step_count"] = m.bounds.step_count->to_string();
  if (m.bounds.revisions) b["revisions"] = *m.bounds.revisions;
  if (m.bounds.running_time) b["running_time"] = to_json(*m.bounds.running_time);
  return b;
}

LengthFn parse_length_fn(const std::string& table, const std::string& file, const std::string& tail, Natural slope) {
  if (!file.empty()) return length_fn_from_json(read_json_arg(file));
  if (table.empty()) throw UsageError("a length function is required (--l or --l-table)");
  std::vector<Natural> v;
  std::stringstream ss(table);
  for (std::string tok; std::getline(ss, tok, ',');) v.push_back(std::stoull(tok));
  if (tail == "affine") return LengthFn(std::move(v), LengthFn::Tail::Affine, slope);
  if (tail != "constant") throw UsageError("tail must be constant or affine");
  return LengthFn(std::move(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle machines, second-order polynomials and strong polynomial time"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every verb");

  Natural fuel = kDefaultFuel;
  std::uint64_t seed = 1;
  int exit_code = kOk;

  // run ---------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run a machine against an oracle");
  std::string machine_spec, oracle_spec = "empty", input, trace_path;
  run_cmd->add_option("machine", machine_spec, "gallery:<name> or machine file")->required();
  run_cmd->add_option("--oracle", oracle_spec, "oracle shorthand or JSON file");
  run_cmd->add_option("--input", input, "input bit string");
  run_cmd->add_option("--fuel", fuel, "step limit");
  run_cmd->add_option("--trace", trace_path, "write the trace file here");
  run_cmd->callback([&] {
    const Machine m = load_machine(machine_spec);
    Oracle o = load_oracle(oracle_spec);
    if (!is_bit_string(input)) throw UsageError("input must be a bit string");
    const auto r = run(m.program, o, input, fuel);
    if (!trace_path.empty()) write_text(trace_path, trace_to_string(r.trace));
    print(run_report(m, input, r));
    exit_code = r.halted() ? kOk : kFuel;
  });

  // check -------------------------------------------------------------------
  auto* check = app.add_subcommand("check", "Check a declared bound");
  check->require_subcommand(1);
  std::string poly_spec, bound_spec, samples_path;
  Natural max_input = 8, count = 1000;

  auto* step = check->add_subcommand("step-count", "n <= t(o(n)) at every step of a trace");
  step->add_option("--trace", trace_path, "trace file")->required();
  step->add_option("--poly", poly_spec, "coefficients [c0, c1, ...] inline or as a file")->required();
  step->callback([&] {
    const Verdict v = check_step_count(load_trace(trace_path), load_unipoly(poly_spec));
    print(to_json(v));
    exit_code = verdict_exit(v);
  });

  auto* opt = check->add_subcommand("opt", "time <= t(max length seen)");
  opt->add_option("--trace", trace_path, "trace file")->required();
  opt->add_option("--poly", poly_spec, "coefficients inline or as a file")->required();
  opt->callback([&] {
    const Verdict v = check_opt(load_trace(trace_path), load_unipoly(poly_spec));
    print(to_json(v));
    exit_code = verdict_exit(v);
  });

  auto* rt = check->add_subcommand("running-time", "time <= T(|phi|, |a|), for a trace or by search over inputs");
  rt->add_option("--bound", bound_spec, "description inline or as a file")->required();
  rt->add_option("--oracle", oracle_spec, "oracle the run used (its size function is charged)")->required();
  rt->add_option("--trace", trace_path, "check this trace");
  rt->add_option("--machine", machine_spec, "or run this machine on inputs up to --max-input");
  rt->add_option("--max-input", max_input, "longest input searched");
  rt->add_option("--fuel", fuel, "step limit per run");
  rt->add_option("--seed", seed, "seed for the searched inputs");
  rt->callback([&] {
    const Description T = load_description(bound_spec);
    const Oracle o = load_oracle(oracle_spec);
    const LengthFn l = length_fn_of(o);
    if (!trace_path.empty()) {
      const Verdict v = check_running_time(load_trace(trace_path), T, l);
      print(to_json(v));
      exit_code = verdict_exit(v);
      return;
    }
    if (machine_spec.empty()) throw UsageError("give --trace or --machine");
    const Machine m = load_machine(machine_spec);
    sampling::Rng rng(seed);
    json checked = 0;
    for (Natural n = 0; n <= max_input; ++n) {
      for (const std::string& a : {std::string(n, '0'), sampling::random_bits(rng, n)}) {
        const auto r = run(m, o, a, fuel);
        const Verdict v = check_running_time(r.trace, T, l);
        checked = checked.get<int>() + 1;
        if (v.fail() || !r.halted()) {
          json j = to_json(v);
          j["witness_input"] = a;
          j["status"] = r.halted() ? "halted" : "fuel-exhausted";
          if (!r.halted()) j["verdict"] = "fail";
          print(j);
          exit_code = kFail;
          return;
        }
      }
    }
    print({{"check", "running-time"}, {"verdict", "pass"}, {"inputs_checked", checked}});
  });

  auto* mj = check->add_subcommand("majorant", "eval(T, l, n) <= p_N(l, n) over a sample");
  mj->add_option("--bound", bound_spec, "description inline or as a file")->required();
  mj->add_option("--samples", samples_path, "JSON array of {\"l\": length function, \"n\": k}");
  mj->add_option("--count", count, "otherwise draw this many seeded samples");
  mj->add_option("--seed", seed, "sample seed");
  mj->callback([&] {
    const Description T = load_description(bound_spec);
    std::vector<std::pair<LengthFn, Natural>> samples;
    if (!samples_path.empty()) {
      for (const auto& s : read_json_arg(samples_path)) samples.emplace_back(length_fn_from_json(s.at("l")), s.at("n"));
    } else {
      sampling::Rng rng(seed);
      for (Natural i = 0; i < count; ++i)
        samples.emplace_back(sampling::random_length_fn(rng, {16, 64, false, 0}), sampling::uniform(rng, 0, 16));
    }
    std::size_t failures = 0;
    json first = nullptr;
    for (const auto& [l, n] : samples) {
      const auto c = check_majorant_bound(T, l, n);
      if (!c.pass && failures++ == 0) first = {{"n", n}, {"l", to_json(l)}, {"value", c.value}, {"bound", c.bound}};
    }
    print({{"check", "majorant"}, {"verdict", failures == 0 ? "pass" : "fail"}, {"samples", samples.size()},
           {"failures", failures}, {"first_failure", first}});
    exit_code = failures == 0 ? kOk : kFail;
  });

  // poly --------------------------------------------------------------------
  auto* poly = app.add_subcommand("poly", "Operations on second-order polynomial descriptions");
  poly->require_subcommand(1);
  std::string a_spec, b_spec, out_path, l_table, l_file, l_tail = "constant";
  Natural l_slope = 0, n_value = 0;
  auto binary = [&](const char* name, const char* help, auto op) {
    auto* c = poly->add_subcommand(name, help);
    c->add_option("P", a_spec, "description")->required();
    c->add_option("Q", b_spec, "description")->required();
    c->add_option("-o,--out", out_path, "output file (default stdout)");
    c->callback([&, op] { write_text(out_path, to_json(op(load_description(a_spec), load_description(b_spec))).dump(2) + "\n"); });
  };
  binary("sum", "P + Q", sum_descriptions);
  binary("product", "P * Q", product_descriptions);
  binary("subst-second", "P(l, Q(l, n))", subst_second_arg);
  binary("subst-function", "P(Q(l, .), n)", subst_function_arg);
  auto* plus = poly->add_subcommand("plus", "l(P(l, n))");
  plus->add_option("P", a_spec, "description")->required();
  plus->add_option("-o,--out", out_path, "output file (default stdout)");
  plus->callback([&] { write_text(out_path, to_json(apply_plus(load_description(a_spec))).dump(2) + "\n"); });
  auto* maj = poly->add_subcommand("majorant", "height N and dominating polynomial p");
  maj->add_option("P", a_spec, "description")->required();
  maj->callback([&] {
    const Majorant m = majorant(load_description(a_spec));
    print({{"N", m.height}, {"p", to_json(m.bound)}, {"p_text", m.bound.to_string()}});
  });
  auto* ev = poly->add_subcommand("eval", "evaluate at a length function and n");
  ev->add_option("P", a_spec, "description")->required();
  ev->add_option("--l", l_file, "length function JSON");
  ev->add_option("--l-table", l_table, "length function values l(0),l(1),... ");
  ev->add_option("--tail", l_tail, "constant or affine continuation of the table");
  ev->add_option("--slope", l_slope, "slope of an affine tail");
  ev->add_option("--n", n_value, "first-order argument")->required();
  ev->callback([&] {
    const Description d = load_description(a_spec);
    const LengthFn l = parse_length_fn(l_table, l_file, l_tail, l_slope);
    const Majorant m = majorant(d);
    print({{"value", eval_description(d, l, n_value)}, {"p_N", eval_pN(m, l, n_value, m.height)}});
  });

  // gallery -----------------------------------------------------------------
  auto* gal = app.add_subcommand("gallery", "Built-in machines");
  gal->require_subcommand(1);
  std::string gname;
  gal->add_subcommand("list", "names of the gallery machines")->callback([&] { print(gallery::machine_names()); });
  auto* show = gal->add_subcommand("show", "declared bounds of a gallery machine");
  show->add_option("name", gname, "gallery machine name")->required();
  show->add_flag("--program", [&](std::int64_t) { out_path = "program"; }, "print the expanded program instead");
  show->callback([&] {
    const Machine m = load_machine("gallery:" + gname);
    if (out_path == "program") {
      print(to_json(m));
      return;
    }
    print({{"name", m.name}, {"tapes", m.program.tapes}, {"instructions", m.program.code.size()},
           {"bounds", bounds_json(m)}});
  });
  gal->add_subcommand("constants", "recompute the fitted constants next to their frozen values")->callback([&] {
    print({{"iterated_apply", {calibration::iterated_apply_scale(), gallery::frozen::kIteratedApply}},
           {"max_length", {calibration::max_length_scale(), gallery::frozen::kMaxLength}},
           {"identity", {calibration::identity_scale(), gallery::frozen::kIdentity}},
           {"bruteforce", {calibration::bruteforce_scale(), gallery::frozen::kBruteForce}},
           {"compose", {calibration::compose_scale(), gallery::frozen::kCompose}},
           {"clock", {calibration::clock_scale(), kClockStepScale}}});
  });

  // adversary ---------------------------------------------------------------
  auto* adv = app.add_subcommand("adversary", "Run an adversary against a machine");
  adv->require_subcommand(1);
  Natural revisions = 0, depth = 0, max_iterations = 64;
  std::string oracle_out;
  auto* flr = adv->add_subcommand("flr", "finite-revision stress: answers 0^{N+i} on input 0^N");
  flr->add_option("machine", machine_spec, "gallery:<name> or machine file")->required();
  flr->add_option("--revisions,-N", revisions, "revision bound N under test");
  flr->add_option("--fuel", fuel, "step limit");
  flr->add_option("--oracle-out", oracle_out, "write the finalized oracle here");
  flr->callback([&] {
    const Machine m = load_machine(machine_spec);
    const auto r = gallery::flr_stress(m, revisions, fuel);
    if (!oracle_out.empty()) write_text(oracle_out, to_json(r.finalized).dump(2) + "\n");
    print({{"machine", m.name}, {"N", r.N}, {"input", r.input}, {"status", r.run.halted() ? "halted" : "fuel-exhausted"},
           {"output", r.run.output}, {"revisions", r.revisions.strict_increases}, {"exceeded", r.exceeded},
           {"planted", r.planted ? json(*r.planted) : json(nullptr)}, {"correct_output", r.correct_output},
           {"output_wrong", r.output_wrong}, {"replay_identical", r.replay_identical}});
    exit_code = r.run.halted() ? kOk : kFuel;
  });
  auto* dg = adv->add_subcommand("delayed", "delayed-growth construction on input 0^{2^{2^{n+1}}-1}");
  dg->add_option("machine", machine_spec, "gallery:<name> or machine file")->required();
  dg->add_option("--depth,-n", depth, "construction depth n (0 or 1)");
  dg->add_option("--fuel", fuel, "step limit per replay");
  dg->add_option("--max-iterations", max_iterations, "replay cap");
  dg->add_option("--oracle-out", oracle_out, "write the finalized oracle here");
  dg->callback([&] {
    const Machine m = load_machine(machine_spec);
    if (depth > 1) throw UsageError("depth must be 0 or 1");
    const auto r = gallery::delayed_growth_adversary(m, depth, fuel, max_iterations);
    if (!oracle_out.empty()) write_text(oracle_out, to_json(r.phi).dump(2) + "\n");
    print({{"machine", m.name}, {"n", r.n}, {"input_length", r.input.size()}, {"iterations", r.iterations},
           {"converged", r.converged}, {"planted_while_running", r.planted_while_running},
           {"planted_at_finalize", r.planted_at_finalize}, {"in_class_A", r.class_a.pass},
           {"status", r.on_phi.halted() ? "halted" : "fuel-exhausted"}, {"output_length", r.on_phi.output.size()},
           {"correct_output_length", r.correct_output.size()}, {"agrees", r.agrees},
           {"time_on_truncation", r.on_psi.trace.time}, {"replay_identical", r.replay_identical}});
    exit_code = r.on_phi.halted() ? kOk : kFuel;
  });

  // transform ---------------------------------------------------------------
  auto* tr = app.add_subcommand("transform", "Build a machine from others (written as a machine file)");
  tr->require_subcommand(1);
  std::string inner_spec;
  auto* comp = tr->add_subcommand("compose", "M with its oracle replaced by N^phi");
  comp->add_option("M", machine_spec, "outer machine")->required();
  comp->add_option("N", inner_spec, "inner machine")->required();
  comp->add_option("-o,--out", out_path, "output file (default stdout)");
  comp->callback([&] {
    write_text(out_path, to_json(compose_machines(load_machine(machine_spec), load_machine(inner_spec))).dump() + "\n");
  });
  auto* clk = tr->add_subcommand("clock", "revision counter N and budget p(recorded length)");
  clk->add_option("M", machine_spec, "machine")->required();
  clk->add_option("--revisions,-N", revisions, "revision counter start")->required();
  clk->add_option("--poly", poly_spec, "budget polynomial coefficients")->required();
  clk->add_option("-o,--out", out_path, "output file (default stdout)");
  clk->callback([&] {
    write_text(out_path,
               to_json(clock_finite_revision(load_machine(machine_spec), revisions, load_unipoly(poly_spec))).dump() +
                   "\n");
  });
  auto* mclk = tr->add_subcommand("majorant-clock", "clock from the majorant of a running-time bound");
  mclk->add_option("M", machine_spec, "machine")->required();
  mclk->add_option("--bound", bound_spec, "running-time description (default: the machine's declared one)");
  mclk->add_option("-o,--out", out_path, "output file (default stdout)");
  mclk->callback([&] {
    const Machine m = load_machine(machine_spec);
    std::optional<Description> T = m.bounds.running_time;
    if (!bound_spec.empty()) T = load_description(bound_spec);
    if (!T) throw UsageError("machine declares no running time; pass --bound");
    write_text(out_path, to_json(clock_with_majorant(m, *T)).dump() + "\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << '\n';
    return kUsage;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return exit_code;
}
