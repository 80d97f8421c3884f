// Acceptance harness: exercises the simulator end to end and prints one
// verdict line per criterion.  Usage: advnet_acceptance <path-to-cli>.
// Exits nonzero when a required criterion fails; the final criterion is
// informational only.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "advnet/cli.hpp"
#include "advnet/harness.hpp"
#include "oracles.hpp"

namespace topo = advnet::topo;
namespace code = advnet::code;
namespace adv = advnet::adv;
namespace sim = advnet::sim;
using advnet::Rng;
using advnet::gf::Element;
using advnet::gf::FieldParams;

namespace {

std::string g_cli;  // path to the command-line binary under test

struct Check {
  std::string detail;
  bool ok = true;
  bool warned = false;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void warn(const std::string& msg) {
    warned = true;
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

std::string fixture(const std::string& name) {
  return std::string(ADVNET_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------------------
// 1. Cut values and residual rates on the bundled fixture networks.
Check criterion_cuts() {
  Check c;
  const topo::LoadResult fig1 = topo::load_network_file(fixture("fig1.net"));
  c.require(topo::min_cut(fig1.net, "v0", "t") == 3, "fig1 full cut != 3");
  const std::vector<std::pair<std::vector<std::string>, uint64_t>> removals = {
      {{"e4", "e5"}, 2}, {{"e6"}, 2}, {{"e7"}, 2}, {{"e4", "e6", "e7"}, 0}};
  for (const auto& [dead, want] : removals) {
    const topo::Network g = topo::delete_edges(fig1.net, dead);
    c.require(topo::min_cut(g, "v0", "t") == want,
              "fig1 cut after deleting " + dead[0] + "... != " +
                  std::to_string(want));
  }
  c.require(topo::residual_rate(fig1.net, *fig1.adversary) == 2,
            "fig1 residual rate != 2 at one corrupt node");
  topo::AdversarySpec honest{topo::AdversarySpec::Kind::NodeBased, 0, {}};
  c.require(topo::residual_rate(fig1.net, honest) == 3,
            "fig1 residual rate != 3 with no adversary");

  const topo::LoadResult fig5 = topo::load_network_file(fixture("fig5.net"));
  c.require(topo::min_cut(fig5.net, "v0", "t") == 3, "fig5 full cut != 3");
  c.require(topo::residual_rate(fig5.net, *fig5.adversary) == 1,
            "fig5 residual rate != 1");

  // the same numbers through the command line
  const std::string out = "acc_cuts.txt";
  c.require(shell(g_cli + " mincut --network " + fixture("fig1.net") + " > " +
                  out) == 0,
            "mincut subcommand failed");
  c.require(slurp(out) == "mincut v0 -> t: 3\n", "mincut output mismatch");
  std::remove(out.c_str());
  return c;
}

// ---------------------------------------------------------------------------
// 2. Exhaustive single-check soundness in small fields.  A content-wrong
// packet passes at most a p^(n-m) fraction of all (s, d) secret pairs.
// The sharpest achievable fraction is in fact p^(n-1-m): the digest uses
// powers p^1..p^(n+r), so every difference polynomial is the p-th power of
// one of half the degree, with at most p^(n-1) roots.  The sweep covers
// every payload tampering and spot-checks the structural cases.
Check criterion_exhaustive_soundness() {
  Check c;

  auto sweep = [&](uint32_t p, uint32_t m) {
    const auto field = FieldParams::make(p, m);
    code::CodeParams cp;
    cp.field = field;
    cp.n = 2;
    cp.r = 1;
    cp.node_order = {"u"};
    const std::vector<Element> msg{field->element(7), field->element(9)};
    const code::MessageMatrix x = code::message_matrix(msg, cp);
    const auto ipow = [](uint64_t b, uint32_t e) {
      uint64_t v = 1;
      while (e--) v *= b;
      return v;
    };
    const uint64_t q = static_cast<uint64_t>(field->order());
    const uint64_t pairs = q * q;
    const uint64_t bound_hits = pairs / ipow(p, m - 2);  // p^(n-m), n = 2
    const uint64_t sharp_hits = pairs / ipow(p, m - 1);  // p^(n-1-m)

    // check-symbol values for d = 0, one per evaluation point
    std::vector<Element> base;
    for (uint64_t s = 0; s < q; ++s) {
      const code::SecretBundle b{{field->element(s)}, {field->zero()}};
      base.push_back(code::compute_hash_block(x, b, cp)[0]);
    }

    // count the (s, d) pairs accepting one tampered packet
    auto hits_for = [&](const Element& dw1, const Element& dw2,
                        const Element& dw3, const Element& dh) {
      code::Packet pkt;
      pkt.w = {msg[0] + dw1, msg[1] + dw2, field->one() + dw3};
      pkt.h = {field->zero()};
      uint64_t hits = 0;
      for (uint64_t s = 0; s < q; ++s)
        for (uint64_t dv = 0; dv < q; ++dv) {
          const code::SecretBundle b{{field->element(s)},
                                     {field->element(dv)}};
          pkt.h[0] = field->element(dv) + base[s] + dh;
          if (code::verify_packet(pkt, b, 0, cp) == code::Verdict::Valid)
            ++hits;
        }
      return hits;
    };

    // every payload tampering (both symbols, header and checks untouched)
    uint64_t worst = 0;
    for (uint64_t a = 0; a < q; ++a)
      for (uint64_t b = 0; b < q; ++b) {
        if (a == 0 && b == 0) continue;
        const uint64_t hits =
            hits_for(field->element(a), field->element(b), field->zero(),
                     field->zero());
        c.require(hits <= bound_hits,
                  "payload tampering passed " + std::to_string(hits) + "/" +
                      std::to_string(pairs) + " (bound " +
                      std::to_string(bound_hits) + ") at p=" +
                      std::to_string(p));
        worst = std::max(worst, hits);
      }
    c.require(worst == sharp_hits,
              "worst payload tampering passed " + std::to_string(worst) +
                  "/" + std::to_string(pairs) + "; the sharp value is " +
                  std::to_string(sharp_hits) + " at p=" + std::to_string(p));

    // a header rescaling coupled with untouched payload is a real forgery
    const uint64_t coupled = hits_for(field->zero(), field->zero(),
                                      field->element(p), field->zero());
    c.require(coupled > 0 && coupled <= bound_hits,
              "header-coupled tampering escaped the bound at p=" +
                  std::to_string(p));

    // a tampered check symbol alone never passes anywhere
    for (const uint64_t dh : {uint64_t{1}, q - 1})
      c.require(hits_for(field->zero(), field->zero(), field->zero(),
                         field->element(dh)) == 0,
                "a check-symbol-only tampering passed at p=" +
                    std::to_string(p));

    // erasing the header (adding -1 to its single coefficient) must yield
    // the all-zero claim, which is refused by convention everywhere
    c.require(hits_for(field->zero(), field->zero(), -field->one(),
                       field->zero()) == 0,
              "a zero-header packet passed at p=" + std::to_string(p));

    // rescaling the whole packet keeps it a correct combination: accepted
    // by every secret pair
    const Element cscale = field->element(p + 1);
    {
      code::Packet pkt;
      pkt.w = {msg[0] * cscale, msg[1] * cscale, cscale};
      pkt.h = {field->zero()};
      uint64_t hits = 0;
      for (uint64_t s = 0; s < q; ++s)
        for (uint64_t dv = 0; dv < q; ++dv) {
          const code::SecretBundle b{{field->element(s)},
                                     {field->element(dv)}};
          pkt.h[0] = field->element(dv) + base[s];
          if (code::verify_packet(pkt, b, 0, cp) == code::Verdict::Valid)
            ++hits;
        }
      c.require(hits == pairs, "a rescaled correct packet was refused " +
                                   std::to_string(pairs - hits) + " times");
    }
  };

  sweep(2, 4);  // GF(16): bound 64/256, sharp worst case 32/256
  sweep(3, 3);  // GF(27): bound 243/729, sharp worst case 81/729
  return c;
}

// ---------------------------------------------------------------------------
// 3. At scale, wrong packets pass verification at most at the forgery
// bound: >= 120000 corrupted deliveries, rate within p^(n-m) + 3 interval
// half-widths.
Check criterion_false_accept_rate() {
  Check c;
  const topo::LoadResult fig1 = topo::load_network_file(fixture("fig1.net"));
  const code::CodeParams params =
      code::derive_params(fig1.net, *fig1.adversary, 8, 16);
  const auto sets = topo::adversary_sets(fig1.net, *fig1.adversary);

  sim::TrialConfig cfg;
  cfg.net = &fig1.net;
  cfg.params = params;
  for (const auto& s : sets)
    if (s.label == "nodes:a") cfg.set = s;
  cfg.strategy = adv::Strategy{adv::Strategy::Kind::ForgePayload};
  cfg.master_seed = 20240818;
  const sim::Report rep = sim::monte_carlo(cfg, 60000, 8);

  c.require(rep.corrupted_deliveries >= 120000,
            "only " + std::to_string(rep.corrupted_deliveries) +
                " corrupted deliveries; wanted at least 120000");
  const double limit = rep.forge_bound + 3 * rep.false_accept_halfwidth;
  c.require(rep.false_accept_rate <= limit,
            "false-accept rate " + std::to_string(rep.false_accept_rate) +
                " above " + std::to_string(limit));
  c.detail = "rate " + std::to_string(rep.false_accept_rate) + " vs bound " +
             std::to_string(rep.forge_bound) + " over " +
             std::to_string(rep.corrupted_deliveries) + " deliveries";
  c.warned = c.ok;  // keep the detail visible on success
  return c;
}

// ---------------------------------------------------------------------------
// 4. Completeness: honest traffic is never refused, across >= 10000 checks.
Check criterion_completeness() {
  Check c;
  const topo::LoadResult fig1 = topo::load_network_file(fixture("fig1.net"));
  const code::CodeParams params =
      code::derive_params(fig1.net, *fig1.adversary, 8, 16);

  sim::TrialConfig cfg;
  cfg.net = &fig1.net;
  cfg.params = params;
  cfg.set.label = "none";
  cfg.strategy = adv::Strategy{adv::Strategy::Kind::Silent};
  cfg.master_seed = 424242;
  const sim::Report rep = sim::monte_carlo(cfg, 1500, 8);

  c.require(rep.verifications >= 10000,
            "only " + std::to_string(rep.verifications) + " checks ran");
  c.require(rep.verifications == 1500 * 7,
            "expected 7 checks per trial on this topology");
  c.require(rep.isolation_events == 0,
            std::to_string(rep.isolation_events) +
                " honest packets were refused");
  c.require(rep.false_accepts == 0 && rep.corrupted_deliveries == 0,
            "honest runs produced corrupted packets");
  c.require(rep.decode_errors == 0, "honest runs failed to decode");
  return c;
}

// ---------------------------------------------------------------------------
// 5. Full sweep at near-capacity rate: every strategy x adversary-set cell
// stays inside its analytical budget, and the code rate meets the
// guaranteed expression exactly.
Check criterion_sweep() {
  Check c;
  const topo::LoadResult fig1 = topo::load_network_file(fixture("fig1.net"));

  sim::ExperimentConfig cfg;
  cfg.net = &fig1.net;
  cfg.spec = *fig1.adversary;
  for (const auto& name :
       {"silent", "erase", "random", "forge-payload", "forge-own-hash",
        "forge-foreign-hash"})
    cfg.strategies.push_back(adv::Strategy::parse(name));
  cfg.n = 16;
  cfg.m = 32;
  cfg.trials = 10000;
  cfg.workers = 8;
  cfg.master_seed = 7141;
  const sim::ExperimentResult res = sim::run_experiment(cfg);

  c.require(res.rows.size() == 24, "expected 4 sets x 6 strategies");
  uint64_t corrupted_total = 0;
  for (const auto& row : res.rows) {
    corrupted_total += row.corrupted_deliveries;
    const double fa_limit = row.forge_bound + 3 * row.false_accept_halfwidth;
    c.require(row.false_accept_rate <= fa_limit,
              row.adversary_set + "/" + row.strategy +
                  ": false-accept rate above its bound");
    const double rank_rate =
        static_cast<double>(row.rank_failures) / row.trials;
    const double pe_limit =
        row.error_bound + rank_rate +
        3 * sim::wilson_halfwidth(row.decode_errors, row.trials);
    c.require(row.empirical_pe <= pe_limit,
              row.adversary_set + "/" + row.strategy +
                  ": decode-error rate above its bound");
  }
  c.require(corrupted_total > 0, "the sweep never delivered a wrong packet");

  // guaranteed rate: n r / (n + r + delta) == r - r (r + delta) / (n+r+delta)
  const uint64_t r = res.params.r, delta = res.params.delta();
  for (const uint32_t n : {8u, 16u, 64u, 343u}) {
    const double got = sim::achieved_rate(n, r, delta);
    const double want =
        r - static_cast<double>(r) * (r + delta) / (n + r + delta);
    c.require(std::fabs(got - want) <= 1e-12, "rate identity violated");
  }

  // block-length suggestions shrink the gap monotonically and hit the
  // pinned worst case
  const std::vector<std::pair<double, uint32_t>> grid = {
      {1.9, 1}, {1.5, 7}, {1.0, 19}, {0.5, 55}, {0.2, 163}, {0.1, 343}};
  uint32_t prev = 0;
  for (const auto& [eps, want] : grid) {
    const sim::SuggestedParams sp =
        sim::suggest_params(fig1.net, *fig1.adversary, eps);
    c.require(sp.n == want, "suggested n for eps=" + std::to_string(eps) +
                                " was " + std::to_string(sp.n) +
                                ", wanted " + std::to_string(want));
    c.require(sp.m == 2 * sp.n, "suggested m must be 2n");
    c.require(sp.n > prev, "suggested n must grow as eps shrinks");
    prev = sp.n;
  }
  return c;
}

// ---------------------------------------------------------------------------
// 6. The erasure-capacity expression at zero erasure probability equals an
// exhaustively computed residual min cut on random capacitated graphs.
Check criterion_erasure_bound() {
  Check c;
  Rng rng(6021);
  for (int round = 0; round < 20; ++round) {
    const uint32_t internal = 1 + rng.below(4);
    std::vector<std::string> names{"v0"};
    for (uint32_t i = 0; i < internal; ++i)
      names.push_back("m" + std::to_string(i));
    names.push_back("t");

    topo::Network net;
    net.add_node("v0", topo::Role::Source);
    for (uint32_t i = 0; i < internal; ++i)
      net.add_node(names[1 + i], topo::Role::Internal);
    net.add_node("t", topo::Role::Dest);

    std::vector<oracle::CutEdge> mirror;
    std::vector<std::string> ids;
    int eid = 0;
    for (size_t u = 0; u < names.size(); ++u)
      for (size_t w = u + 1; w < names.size(); ++w) {
        if (rng.below(10) >= 6) continue;
        const uint64_t cap = 1 + rng.below(3);
        const std::string id = "e" + std::to_string(eid++);
        net.add_edge(id, names[u], names[w], cap);
        mirror.push_back({names[u], names[w], cap});
        ids.push_back(id);
      }

    const double full = sim::erasure_bound(net, {}, 64, 0.0);
    c.require(full == static_cast<double>(
                          oracle::brute_force_min_cut(mirror, "v0", "t")),
              "bound != exhaustive cut on round " + std::to_string(round));

    // and again after deleting a random subset of edges
    std::vector<std::string> dead;
    std::vector<oracle::CutEdge> left;
    for (size_t k = 0; k < ids.size(); ++k) {
      if (rng.below(3) == 0)
        dead.push_back(ids[k]);
      else
        left.push_back(mirror[k]);
    }
    const double cut = sim::erasure_bound(net, dead, 64, 0.0);
    c.require(cut == static_cast<double>(
                         oracle::brute_force_min_cut(left, "v0", "t")),
              "residual bound != exhaustive cut on round " +
                  std::to_string(round));

    // the erasure term scales the zero-erasure value as specified
    const double pe = 0.25;
    const double want =
        (cut + (-pe * std::log2(pe) - 0.75 * std::log2(0.75)) / 64.0) /
        (1.0 - pe);
    c.require(std::fabs(sim::erasure_bound(net, dead, 64, pe) - want) < 1e-12,
              "erasure scaling mismatch");
  }
  return c;
}

// ---------------------------------------------------------------------------
// 7. Splicing both ways confounds a destination without secrets (identical
// transcripts) and is separated and caught with secrets in >= 99% of runs.
Check criterion_confoundment() {
  Check c;
  const topo::Network net =
      topo::load_network_file(fixture("fig1.net")).net;
  const std::vector<std::string> set_a{"e6", "e7"}, set_b{"e4"};

  Rng rng(333);
  uint64_t blind_equal = 0, guarded_shown = 0;
  const int rounds = 1000;
  for (int i = 0; i < rounds; ++i) {
    std::vector<uint8_t> msg_a(16), msg_b(16);
    for (auto& b : msg_a) b = static_cast<uint8_t>(rng.below(256));
    for (auto& b : msg_b) b = static_cast<uint8_t>(rng.below(256));
    const uint64_t seed = rng.next();

    const sim::SymmetrizeOutcome blind = sim::symmetrize_demo(
        net, set_a, set_b, msg_a, msg_b, 8, 16, 2, false, seed);
    if (blind.transcripts_equal) ++blind_equal;

    const sim::SymmetrizeOutcome guarded = sim::symmetrize_demo(
        net, set_a, set_b, msg_a, msg_b, 8, 16, 2, true, seed);
    if (!guarded.transcripts_equal && guarded.forged_rejected > 0)
      ++guarded_shown;
  }
  c.require(blind_equal == rounds,
            std::to_string(rounds - blind_equal) +
                " unprotected runs failed to confound");
  c.require(guarded_shown >= 990,
            "secrets caught the attack in only " +
                std::to_string(guarded_shown) + "/1000 runs");

  // the same story through the command line, one run each way
  const std::string scn = fixture("symmetrize.scn");
  c.require(shell(g_cli + " demo-symmetrize --scenario " + scn +
                  " > acc_demo.txt") == 0,
            "unprotected demo did not exit 0");
  c.require(shell(g_cli + " demo-symmetrize --scenario " + scn +
                  " --with-secrets > acc_demo.txt") == 0,
            "protected demo did not exit 0");
  std::remove("acc_demo.txt");
  return c;
}

// ---------------------------------------------------------------------------
// 8. Bit-for-bit reproducibility through the real binary: one seed, two
// worker counts, identical reports.
Check criterion_determinism() {
  Check c;
  const std::string base = g_cli + " run --network " + fixture("fig1.net") +
                           " --strategy forge-payload,random --n 8 --m 16"
                           " --trials 500 --seed 99 --format csv";
  c.require(shell(base + " --workers 1 --out acc_w1 > acc_run1.txt") == 0,
            "run with 1 worker failed");
  c.require(shell(base + " --workers 8 --out acc_w8 > acc_run2.txt") == 0,
            "run with 8 workers failed");
  const std::string csv1 = slurp("acc_w1.csv"), csv8 = slurp("acc_w8.csv");
  c.require(!csv1.empty(), "no report was written");
  c.require(csv1 == csv8, "reports differ across worker counts");
  c.require(slurp("acc_run1.txt") == slurp("acc_run2.txt"),
            "stdout differs across worker counts");
  c.require(slurp("acc_w1.txt") == slurp("acc_w8.txt"),
            "text reports differ across worker counts");
  for (const char* f : {"acc_w1.csv", "acc_w1.txt", "acc_w8.csv",
                        "acc_w8.txt", "acc_run1.txt", "acc_run2.txt"})
    std::remove(f);
  return c;
}

// ---------------------------------------------------------------------------
// 9. Informational: encoding cost grows about linearly in the block length
// (log-log slope <= 1.3 between successive doublings).
Check criterion_encode_scaling() {
  Check c;
  const auto field = FieldParams::make(2, 16);
  std::vector<double> lens, times;
  for (const uint32_t n : {64u, 128u, 256u, 512u}) {
    code::CodeParams cp;
    cp.field = field;
    cp.n = n;
    cp.r = 1;
    cp.node_order = {"u"};
    Rng rng(n);
    std::vector<Element> msg;
    for (uint32_t i = 0; i < n; ++i) msg.push_back(field->sample(rng));
    const auto secrets = code::sample_secrets(rng, cp);

    double best = 1e100;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int k = 0; k < 200; ++k) {
        const auto pkts = code::source_packets(msg, secrets, cp);
        if (pkts[0].w.size() != n + 1) std::abort();  // keep it honest
      }
      const auto t1 = std::chrono::steady_clock::now();
      best = std::min(best,
                      std::chrono::duration<double>(t1 - t0).count());
    }
    lens.push_back(std::log2(static_cast<double>(n)));
    times.push_back(std::log2(best));
  }
  // least-squares slope of log time against log length
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(lens.size());
  for (size_t i = 0; i < lens.size(); ++i) {
    sx += lens[i];
    sy += times[i];
    sxx += lens[i] * lens[i];
    sxy += lens[i] * times[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  char msg[96];
  std::snprintf(msg, sizeof(msg), "log-log slope %.2f over n=64..512", slope);
  if (slope > 1.3)
    c.warn(std::string(msg) + " exceeds 1.3: check encoder hot paths");
  else
    c.warn(msg);  // informational either way; never fails the run
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];

  struct Criterion {
    const char* name;
    bool required;
    std::function<Check()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"cut and rate values on the bundled fixtures", true, criterion_cuts},
      {"exhaustive small-field soundness stays within the per-check bound",
       true, criterion_exhaustive_soundness},
      {"large-scale false-accept rate stays under the forgery bound", true,
       criterion_false_accept_rate},
      {"honest packets always pass verification", true,
       criterion_completeness},
      {"strategy sweep respects error budgets at near-capacity rate", true,
       criterion_sweep},
      {"erasure-free capacity bound matches exhaustive cuts", true,
       criterion_erasure_bound},
      {"splicing confounds without secrets and is caught with them", true,
       criterion_confoundment},
      {"reports are byte-identical across worker counts", true,
       criterion_determinism},
      {"encoding cost scales about linearly (informational)", false,
       criterion_encode_scaling},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool counts = !c.ok && criteria[i].required;
    if (counts) ++failures;
    std::printf("[%s] %zu. %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
