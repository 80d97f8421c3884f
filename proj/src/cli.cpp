#include "advnet/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "advnet/errors.hpp"
#include "advnet/harness.hpp"

namespace advnet::cli {

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<uint8_t> parse_hex(const std::string& s, int line_no) {
  if (s.size() % 2 != 0)
    throw ParseError("hex string needs an even digit count", line_no);
  auto digit = [&](char c) -> uint8_t {
    if (c >= '0' && c <= '9') return static_cast<uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<uint8_t>(c - 'A' + 10);
    throw ParseError(std::string("invalid hex digit '") + c + "'", line_no);
  };
  std::vector<uint8_t> out;
  for (size_t i = 0; i < s.size(); i += 2)
    out.push_back(static_cast<uint8_t>(digit(s[i]) << 4 | digit(s[i + 1])));
  return out;
}

uint64_t digest_bytes(const std::vector<uint8_t>& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// "node-based:z=K" or "sets:FILE" (one adversary set per line in FILE).
topo::AdversarySpec parse_adversary_arg(const std::string& arg) {
  if (arg.rfind("node-based:z=", 0) == 0) {
    const std::string num = arg.substr(13);
    if (num.empty() ||
        !std::all_of(num.begin(), num.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c)) != 0;
        }))
      throw UsageError("bad node budget in --adversary: " + arg);
    topo::AdversarySpec spec;
    spec.kind = topo::AdversarySpec::Kind::NodeBased;
    spec.z = static_cast<uint32_t>(std::stoul(num));
    return spec;
  }
  if (arg.rfind("sets:", 0) == 0) {
    const std::string path = arg.substr(5);
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open adversary set file: " + path);
    topo::AdversarySpec spec;
    spec.kind = topo::AdversarySpec::Kind::General;
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.resize(hash);
      std::istringstream fields(line);
      std::vector<std::string> ids;
      std::string id;
      while (fields >> id) ids.push_back(id);
      if (!ids.empty()) spec.sets.push_back(std::move(ids));
    }
    if (spec.sets.empty())
      throw UsageError("adversary set file lists no sets: " + path);
    return spec;
  }
  throw UsageError(
      "--adversary expects node-based:z=<int> or sets:<file>, got: " + arg);
}

topo::AdversarySpec resolve_adversary(const std::string& flag,
                                      const topo::LoadResult& loaded) {
  if (!flag.empty()) return parse_adversary_arg(flag);
  if (loaded.adversary) return *loaded.adversary;
  throw UsageError(
      "no adversary specification: pass --adversary or add one to the "
      "network file");
}

uint64_t resolve_seed(const std::optional<uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ADVNET_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw UsageError(std::string("ADVNET_SEED is not a number: ") + env);
    return v;
  }
  return 1;
}

void print_warnings(const std::vector<std::string>& warnings,
                    std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

int cmd_mincut(const std::string& network, const std::string& deleted_arg,
               std::ostream& out) {
  const topo::LoadResult loaded = topo::load_network_file(network);
  const std::vector<std::string> deleted = split_commas(deleted_arg);
  const topo::Network net = deleted.empty()
                                ? loaded.net
                                : topo::delete_edges(loaded.net, deleted);
  for (const auto& d : loaded.net.destinations())
    out << "mincut " << loaded.net.source() << " -> " << d << ": "
        << topo::min_cut(net, loaded.net.source(), d) << "\n";
  return 0;
}

int cmd_rate(const std::string& network, const std::string& adversary_arg,
             const std::optional<double>& epsilon, std::ostream& out,
             std::ostream& err) {
  const topo::LoadResult loaded = topo::load_network_file(network);
  const topo::AdversarySpec spec = resolve_adversary(adversary_arg, loaded);
  std::vector<std::string> warnings;
  const auto [enet, espec] =
      topo::expand_capacities(loaded.net, spec, &warnings);
  const topo::AdversarySpec& enum_spec =
      spec.kind == topo::AdversarySpec::Kind::NodeBased ? spec : espec;
  const uint64_t r = topo::residual_rate(enet, enum_spec, &warnings);
  print_warnings(warnings, err);
  out << "residual rate: " << r << "\n";
  if (epsilon) {
    const sim::SuggestedParams sp =
        sim::suggest_params(loaded.net, spec, *epsilon);
    out << "suggested block length n: " << sp.n << "\n";
    out << "suggested field degree m: " << sp.m << "\n";
    out << "check-block overhead delta: " << sp.delta << "\n";
    out << "largest node degree: " << sp.d_max << "\n";
    out << "adversary node budget: " << sp.z << "\n";
  }
  return 0;
}

int cmd_run(const std::string& network, const std::string& adversary_arg,
            const std::string& strategy_arg, uint32_t n, uint32_t m,
            uint32_t p, uint64_t trials, uint32_t workers,
            const std::optional<uint64_t>& seed_flag, const std::string& prefix,
            const std::string& format, bool no_secrets, std::ostream& out,
            std::ostream& err) {
  const topo::LoadResult loaded = topo::load_network_file(network);

  sim::ExperimentConfig cfg;
  cfg.net = &loaded.net;
  cfg.spec = resolve_adversary(adversary_arg, loaded);
  for (const auto& name : split_commas(strategy_arg)) {
    if (name == "all") {
      for (const auto& each : adv::Strategy::names())
        cfg.strategies.push_back(adv::Strategy::parse(each));
    } else {
      cfg.strategies.push_back(adv::Strategy::parse(name));
    }
  }
  cfg.n = n;
  cfg.m = m;
  cfg.p = p;
  cfg.trials = trials;
  cfg.workers = workers;
  cfg.master_seed = resolve_seed(seed_flag);
  cfg.secrets_enabled = !no_secrets;

  const sim::ExperimentResult res = sim::run_experiment(cfg);
  print_warnings(res.warnings, err);

  const std::string text = sim::to_text(res.rows);
  const std::string csv = sim::to_csv(res.rows);
  out << (format == "csv" ? csv : text);

  if (!prefix.empty()) {
    for (const auto& [suffix, body] :
         {std::pair<const char*, const std::string&>{".txt", text},
          {".csv", csv}}) {
      const std::string path = prefix + suffix;
      std::ofstream f(path, std::ios::binary);
      if (!f) throw UsageError("cannot write " + path);
      f << body;
    }
  }

  // Every cell must stay within its analytical budget: wrong packets are
  // accepted at most at the forgery-bound rate, and end-to-end errors stay
  // under the union bound plus whatever rank failures contribute.
  bool breached = false;
  for (const auto& row : res.rows) {
    const double fa_limit =
        row.forge_bound + 3 * row.false_accept_halfwidth;
    const double rank_rate =
        row.trials ? static_cast<double>(row.rank_failures) / row.trials : 0;
    const double pe_limit =
        row.error_bound + rank_rate +
        3 * sim::wilson_halfwidth(row.decode_errors, row.trials);
    if (row.false_accept_rate > fa_limit || row.empirical_pe > pe_limit) {
      breached = true;
      err << "bound exceeded: set=" << row.adversary_set
          << " strategy=" << row.strategy
          << " false_accept_rate=" << row.false_accept_rate
          << " (limit " << fa_limit << ")"
          << " empirical_pe=" << row.empirical_pe << " (limit " << pe_limit
          << ")\n";
    }
  }
  out << "verdict: " << (breached ? "bounds exceeded" : "within bounds")
      << "\n";
  return breached ? 1 : 0;
}

int cmd_demo(const std::string& scenario_path, bool with_secrets,
             const std::optional<uint64_t>& seed_flag, std::ostream& out) {
  const Scenario sc = load_scenario_file(scenario_path);
  const uint64_t seed = resolve_seed(seed_flag);
  const sim::SymmetrizeOutcome o = sim::symmetrize_demo(
      sc.net, sc.set_a, sc.set_b, sc.message_a, sc.message_b, sc.n, sc.m,
      sc.p, with_secrets, seed);

  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ",";
      s += e;
    }
    return s;
  };
  out << "destination: " << o.dest << "\n";
  out << "shared secrets: " << (with_secrets ? "on" : "off") << "\n";
  out << "run A: message w1 sent, adversary on {" << join(sc.set_b)
      << "} splices the traffic of w2\n";
  out << "run B: message w2 sent, adversary on {" << join(sc.set_a)
      << "} splices the traffic of w1\n";
  out << "transcript A: " << hex64(digest_bytes(o.transcript_a)) << " ("
      << o.transcript_a.size() << " bytes)\n";
  out << "transcript B: " << hex64(digest_bytes(o.transcript_b)) << " ("
      << o.transcript_b.size() << " bytes)\n";
  out << "transcripts identical: " << (o.transcripts_equal ? "yes" : "no")
      << "\n";
  if (with_secrets) {
    out << "forged packets rejected at the destination: " << o.forged_rejected
        << "/" << o.forged_seen << "\n";
    const bool shown = !o.transcripts_equal && o.forged_rejected > 0;
    out << "verdict: "
        << (shown ? "forgeries separated and caught" : "attack not caught")
        << "\n";
    return shown ? 0 : 1;
  }
  out << "verdict: "
      << (o.transcripts_equal ? "destination cannot tell the messages apart"
                              : "transcripts unexpectedly differ")
      << "\n";
  return o.transcripts_equal ? 0 : 1;
}

}  // namespace

Scenario load_scenario(std::istream& in, const std::string& name) {
  std::ostringstream network_text;
  Scenario sc;
  bool saw_a1 = false, saw_a2 = false, saw_w1 = false, saw_w2 = false;
  bool saw_n = false, saw_m = false;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = line;
    if (const auto hash = stripped.find('#'); hash != std::string::npos)
      stripped.resize(hash);
    std::istringstream fields(stripped);
    std::string kind;
    if (!(fields >> kind)) continue;

    if (kind == "node" || kind == "edge") {
      network_text << stripped << "\n";
    } else if (kind == "adversary") {
      throw ParseError(
          "scenario files describe the adversary with a1/a2 lines", line_no);
    } else if (kind == "a1" || kind == "a2") {
      std::vector<std::string> ids;
      std::string id;
      while (fields >> id) ids.push_back(id);
      if (ids.empty())
        throw ParseError(kind + " lists no edges", line_no);
      (kind == "a1" ? sc.set_a : sc.set_b) = std::move(ids);
      (kind == "a1" ? saw_a1 : saw_a2) = true;
    } else if (kind == "param") {
      std::string key;
      int64_t value = -1;
      if (!(fields >> key >> value) || value < 1)
        throw ParseError("param lines read: param <n|m|p> <positive int>",
                         line_no);
      if (key == "n") {
        sc.n = static_cast<uint32_t>(value);
        saw_n = true;
      } else if (key == "m") {
        sc.m = static_cast<uint32_t>(value);
        saw_m = true;
      } else if (key == "p") {
        sc.p = static_cast<uint32_t>(value);
      } else {
        throw ParseError("unknown parameter: " + key, line_no);
      }
    } else if (kind == "w1" || kind == "w2") {
      std::string hex;
      if (!(fields >> hex)) throw ParseError(kind + " needs hex bytes", line_no);
      (kind == "w1" ? sc.message_a : sc.message_b) = parse_hex(hex, line_no);
      (kind == "w1" ? saw_w1 : saw_w2) = true;
    } else {
      throw ParseError("unknown scenario directive: " + kind, line_no);
    }
  }

  if (!saw_a1 || !saw_a2)
    throw ParseError("scenario needs both a1 and a2 lines", line_no);
  if (!saw_w1 || !saw_w2)
    throw ParseError("scenario needs both w1 and w2 messages", line_no);
  if (!saw_n || !saw_m)
    throw ParseError("scenario needs param n and param m", line_no);

  std::istringstream net_in(network_text.str());
  sc.net = topo::load_network(net_in, name).net;

  for (const auto* set : {&sc.set_a, &sc.set_b})
    for (const auto& id : *set)
      if (!sc.net.has_edge(id))
        throw ParseError("adversary set names unknown edge: " + id, line_no);
  return sc;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file: " + path);
  return load_scenario(in, path);
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Simulator for authenticated random linear network coding against "
      "jamming adversaries"};
  app.require_subcommand(1);

  // mincut
  std::string net_path, deleted_arg, adversary_arg;
  auto* mincut = app.add_subcommand(
      "mincut", "Min-cut from the source to each destination");
  mincut->add_option("--network", net_path, "network description file")
      ->required();
  mincut->add_option("--deleted-edges", deleted_arg,
                     "comma-separated edges to remove first");

  // rate
  std::optional<double> epsilon;
  auto* rate = app.add_subcommand(
      "rate", "Residual rate once the adversary picks its worst set");
  rate->add_option("--network", net_path, "network description file")
      ->required();
  rate->add_option("--adversary", adversary_arg,
                   "node-based:z=<int> or sets:<file>");
  rate->add_option("--epsilon", epsilon,
                   "also suggest code sizes for this rate/detection slack");

  // run
  std::string strategy_arg, out_prefix, format = "text";
  uint32_t n = 0, m = 0, p = 2, workers = 1;
  uint64_t trials = 0;
  std::optional<uint64_t> seed;
  bool no_secrets = false;
  auto* run = app.add_subcommand(
      "run", "Monte-Carlo sweep over adversary sets and strategies");
  run->add_option("--network", net_path, "network description file")
      ->required();
  run->add_option("--adversary", adversary_arg,
                  "node-based:z=<int> or sets:<file>");
  run->add_option("--strategy", strategy_arg,
                  "comma-separated strategies, or 'all'")
      ->required();
  run->add_option("--n", n, "message block length")->required();
  run->add_option("--m", m, "field degree")->required();
  run->add_option("--p", p, "field characteristic (default 2)");
  run->add_option("--trials", trials, "trials per set/strategy cell")
      ->required();
  run->add_option("--workers", workers, "worker threads (default 1)");
  run->add_option("--seed", seed, "master seed (default ADVNET_SEED or 1)");
  run->add_option("--out", out_prefix,
                  "write <prefix>.txt and <prefix>.csv reports");
  run->add_option("--format", format, "stdout format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  run->add_flag("--no-secrets", no_secrets,
                "disable verification (packets are never rejected)");

  // demo-symmetrize
  std::string scenario_path;
  bool with_secrets = false;
  auto* demo = app.add_subcommand(
      "demo-symmetrize",
      "Two-sided splicing attack from a scenario file: without secrets the "
      "destination's view is message-independent");
  demo->add_option("--scenario", scenario_path, "scenario file")->required();
  demo->add_flag("--with-secrets", with_secrets,
                 "enable verification and show the attack being caught");
  demo->add_option("--seed", seed, "master seed (default ADVNET_SEED or 1)");

  try {
    app.parse(argc, argv);
    if (*mincut) return cmd_mincut(net_path, deleted_arg, out);
    if (*rate) return cmd_rate(net_path, adversary_arg, epsilon, out, err);
    if (*run)
      return cmd_run(net_path, adversary_arg, strategy_arg, n, m, p, trials,
                     workers, seed, out_prefix, format, no_secrets, out, err);
    if (*demo) return cmd_demo(scenario_path, with_secrets, seed, out);
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace advnet::cli
