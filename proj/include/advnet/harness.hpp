#pragma once

// Monte-Carlo harness: propagates coded packets through a network under a
// chosen adversary strategy, applies verify-and-mix relaying at honest
// nodes, decodes at the destinations, and aggregates the outcome counts
// into per-configuration reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "advnet/adversary.hpp"
#include "advnet/secretcode.hpp"
#include "advnet/topology.hpp"

namespace advnet::sim {

// One simulated generation.  All randomness is derived from master_seed,
// trial_index and the adversary-set label, so a trial is reproducible in
// isolation and independent of scheduling.  secrets_salt re-keys only the
// shared secrets, leaving the message, the mixing coefficients and the
// adversary's choices untouched (used to test that attacks cannot depend
// on the secrets).
struct TrialConfig {
  const topo::Network* net = nullptr;  // must be unit-capacity
  code::CodeParams params;
  topo::AdversarySet set;
  adv::Strategy strategy;
  uint64_t master_seed = 0;
  uint64_t trial_index = 0;
  bool secrets_enabled = true;
  uint64_t secrets_salt = 0;
  std::optional<std::vector<gf::Element>> message;      // drawn if absent
  std::optional<std::vector<gf::Element>> alt_message;  // for symmetrize
};

struct VerificationRecord {
  std::string node;
  std::string edge;
  code::Verdict verdict;
  bool content_correct;  // row symbols equal the claimed combination
  bool hash_intact;      // check symbols equal the authentic generation's
};

struct DestReport {
  std::string node;
  code::DecodeResult decode;
  uint32_t valid_inputs = 0;
  bool error = false;  // decode failed or produced the wrong message
};

struct TrialResult {
  std::vector<gf::Element> message;
  std::map<std::string, code::Packet> edge_packets;  // final wire contents
  std::map<std::string, bool> edge_content_correct;
  // For each corrupted edge, the ids of edges already transmitted when the
  // adversary acted (its entire causal view).
  std::map<std::string, std::vector<std::string>> adversary_views;
  std::vector<VerificationRecord> verifications;  // at honest nodes only
  std::vector<DestReport> dests;

  bool decode_error = false;  // some destination erred
  bool rank_failure = false;  // some destination could not invert
  uint64_t verifications_total = 0;
  uint64_t corrupted_deliveries = 0;  // content-wrong packets checked
  uint64_t false_accepts = 0;         // ... that passed verification
  uint64_t isolation_events = 0;      // content-right packets refused
};

TrialResult run_trial(const TrialConfig& cfg);

// Aggregated outcome of many trials of one (adversary set, strategy) cell.
struct Report {
  std::string adversary_set;
  std::string strategy;
  uint64_t trials = 0;
  uint64_t decode_errors = 0;
  uint64_t rank_failures = 0;
  uint64_t verifications = 0;
  uint64_t corrupted_deliveries = 0;
  uint64_t false_accepts = 0;
  uint64_t isolation_events = 0;
  double empirical_pe = 0;             // decode_errors / trials
  double false_accept_rate = 0;        // false_accepts / corrupted_deliveries
  double false_accept_halfwidth = 0;   // 95% Wilson half-width of that rate
  double forge_bound = 0;   // per-check acceptance bound p^(n-m)
  double error_bound = 0;   // union bound z * d_max * p^(n-m)
  double cut_bound = 0;     // min-cut once this set's edges are removed
  double rate = 0;          // message symbols per packet symbol slot
};

// Runs `trials` independent trials of the base configuration (trial_index
// is overridden with 0..trials-1) split across `workers` threads.  The
// aggregate is independent of the worker count.
Report monte_carlo(const TrialConfig& base, uint64_t trials,
                   uint32_t workers);

struct ExperimentConfig {
  const topo::Network* net = nullptr;  // any capacities; expanded internally
  topo::AdversarySpec spec;
  std::vector<adv::Strategy> strategies;
  uint32_t n = 0;
  uint32_t m = 0;
  uint32_t p = 2;
  uint64_t trials = 0;
  uint32_t workers = 1;
  uint64_t master_seed = 0;
  bool secrets_enabled = true;
};

struct ExperimentResult {
  code::CodeParams params;
  std::vector<Report> rows;  // one per (adversary set x strategy)
  std::vector<std::string> warnings;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Smallest block length n (with field degree m = 2n) such that the
// adversary's end-to-end success bound z * d_max * p^(n-m) drops below
// eps while the code rate stays within eps of the residual cut bound.
struct SuggestedParams {
  uint32_t n = 0;
  uint32_t m = 0;
  uint64_t r = 0;
  uint64_t delta = 0;
  uint64_t d_max = 0;
  uint64_t z = 0;  // node budget, or the largest tail count of a set
};

SuggestedParams suggest_params(const topo::Network& net,
                               const topo::AdversarySpec& spec, double eps,
                               uint32_t p = 2);

// n * r / (n + r + delta): message symbols delivered per transmitted
// packet symbol once headers and check blocks are accounted for.
double achieved_rate(uint32_t n, uint64_t r, uint64_t delta);

// Capacity-style upper bound for a network whose adversary both deletes
// the listed edges and erases each surviving packet independently with
// probability erasure_prob, at block length block_bits:
//   (residual min-cut + H(erasure_prob) / block_bits) / (1 - erasure_prob)
double erasure_bound(const topo::Network& net,
                     const std::vector<std::string>& deleted_edges,
                     uint64_t block_bits, double erasure_prob);

// Half-width of the 95% Wilson score interval for `hits` out of `total`.
double wilson_halfwidth(uint64_t hits, uint64_t total);

// Two-sided confoundment experiment.  Run A transmits message_a while the
// adversary on set_b splices in the traffic message_b would have produced;
// run B swaps the roles.  Without shared secrets and with set_a and set_b
// jointly covering the destination's in-edges, the destination observes
// byte-identical transcripts and cannot tell the messages apart.  With
// secrets, the spliced packets fail verification and the transcripts
// separate.
struct SymmetrizeOutcome {
  std::string dest;  // destination(s) whose in-edge traffic is compared
  bool secrets_enabled = false;
  bool transcripts_equal = false;
  uint64_t forged_seen = 0;      // spliced packets checked at destinations
  uint64_t forged_rejected = 0;  // ... that verification refused
  std::vector<uint8_t> transcript_a;
  std::vector<uint8_t> transcript_b;
  code::CodeParams params;
};

SymmetrizeOutcome symmetrize_demo(const topo::Network& net,
                                  const std::vector<std::string>& set_a,
                                  const std::vector<std::string>& set_b,
                                  const std::vector<uint8_t>& message_a,
                                  const std::vector<uint8_t>& message_b,
                                  uint32_t n, uint32_t m, uint32_t p,
                                  bool with_secrets, uint64_t seed);

// Renderers (deterministic; doubles printed with %.10g).
std::string to_csv(const std::vector<Report>& rows);
std::string to_text(const std::vector<Report>& rows);

}  // namespace advnet::sim
