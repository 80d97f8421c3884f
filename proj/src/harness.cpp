#include "advnet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "advnet/errors.hpp"
#include "advnet/rng.hpp"

namespace advnet::sim {

namespace {

using code::CodeParams;
using code::MessageMatrix;
using code::Packet;
using gf::Element;

std::vector<const Packet*> to_ptrs(const std::vector<Packet>& v) {
  std::vector<const Packet*> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(&p);
  return out;
}

std::vector<Element> draw_message(Rng& rng, const CodeParams& p) {
  std::vector<Element> msg;
  msg.reserve(static_cast<size_t>(p.n) * p.r);
  for (uint32_t i = 0; i < p.n * p.r; ++i) msg.push_back(p.field->sample(rng));
  return msg;
}

// Source rows as packets; check blocks only when secrets are in play.
std::vector<Packet> make_sources(
    const std::vector<Element>& msg,
    const std::map<std::string, code::SecretBundle>& secrets,
    const CodeParams& p, bool with_hash) {
  if (with_hash) return code::source_packets(msg, secrets, p);
  const MessageMatrix x = code::message_matrix(msg, p);
  std::vector<Packet> out(p.r);
  for (uint32_t i = 0; i < p.r; ++i)
    for (uint32_t l = 0; l < x.cols; ++l) out[i].w.push_back(x.at(i, l));
  return out;
}

bool header_nonzero(const Packet& pkt, const CodeParams& p) {
  for (uint32_t i = 0; i < p.r; ++i)
    if (!pkt.w[p.n + i].is_zero()) return true;
  return false;
}

// Does the row really equal the combination its header claims?
bool content_matches(const Packet& pkt, const MessageMatrix& x,
                     const CodeParams& p) {
  for (uint32_t l = 0; l < p.n; ++l) {
    Element want = p.field->zero();
    for (uint32_t i = 0; i < p.r; ++i) want += pkt.w[p.n + i] * x.at(i, l);
    if (want != pkt.w[l]) return false;
  }
  return true;
}

uint64_t mix_stream(uint64_t trial_seed, const std::string& edge) {
  return stream_seed(trial_seed, fnv1a(edge.c_str()), "mix");
}

uint64_t distinct_tails(const topo::Network& net,
                        const std::vector<std::string>& edges) {
  std::set<std::string> tails;
  for (const auto& e : edges) tails.insert(net.edge(e).tail);
  return tails.size();
}

uint64_t residual_cut(const topo::Network& net,
                      const std::vector<std::string>& edges) {
  const topo::Network cut = topo::delete_edges(net, edges);
  uint64_t best = UINT64_MAX;
  for (const auto& d : net.destinations())
    best = std::min(best, topo::min_cut(cut, net.source(), d));
  return best == UINT64_MAX ? 0 : best;
}

}  // namespace

TrialResult run_trial(const TrialConfig& cfg) {
  if (cfg.net == nullptr) throw UsageError("trial has no network");
  if (!cfg.params.field) throw UsageError("trial has no code parameters");
  const topo::Network& net = *cfg.net;
  const CodeParams& p = cfg.params;
  for (const topo::Edge& e : net.edges())
    if (e.capacity != 1)
      throw UsageError("trials need a unit-capacity network; expand edge " +
                       e.id);

  const uint64_t trial_seed =
      mix64(stream_seed(cfg.master_seed, cfg.trial_index, "trial") ^
            fnv1a(cfg.set.label.c_str()));

  TrialResult res;

  // Message and (for symmetrize) the alternative message.
  if (cfg.message) {
    if (cfg.message->size() != static_cast<size_t>(p.n) * p.r)
      throw UsageError("message must hold n*r field elements");
    res.message = *cfg.message;
  } else {
    Rng mrng(stream_seed(trial_seed, 0, "message"));
    res.message = draw_message(mrng, p);
  }
  std::vector<Element> alt;
  if (cfg.strategy.kind == adv::Strategy::Kind::Symmetrize) {
    if (cfg.alt_message) {
      if (cfg.alt_message->size() != static_cast<size_t>(p.n) * p.r)
        throw UsageError("alternative message must hold n*r field elements");
      alt = *cfg.alt_message;
    } else {
      Rng arng(stream_seed(trial_seed, 1, "message"));
      alt = draw_message(arng, p);
    }
  }

  std::map<std::string, code::SecretBundle> secrets;
  if (cfg.secrets_enabled) {
    Rng srng(stream_seed(trial_seed, cfg.secrets_salt, "secrets"));
    secrets = code::sample_secrets(srng, p);
  }

  const MessageMatrix x = code::message_matrix(res.message, p);
  const std::vector<Packet> sources =
      make_sources(res.message, secrets, p, cfg.secrets_enabled);
  const std::vector<const Packet*> source_ptrs = to_ptrs(sources);
  const std::vector<Element>* authentic_hash =
      cfg.secrets_enabled ? &sources[0].h : nullptr;

  const std::vector<std::string> order = topo::topo_order(net);

  auto make_null = [&]() {
    Packet pk = code::null_packet(p);
    if (!cfg.secrets_enabled) pk.h.clear();
    return pk;
  };

  // Adversary-free propagation of a reference message with the same mixing
  // streams; the symmetrize strategy splices its row symbols.
  std::optional<std::map<std::string, Packet>> alt_traffic;
  if (cfg.strategy.kind == adv::Strategy::Kind::Symmetrize) {
    const std::vector<Packet> alt_sources =
        make_sources(alt, secrets, p, false);
    const std::vector<const Packet*> alt_ptrs = to_ptrs(alt_sources);
    std::map<std::string, Packet> traffic;
    for (const auto& v : order) {
      std::vector<const Packet*> inputs;
      for (const auto& e : net.in_edge_ids(v)) inputs.push_back(&traffic.at(e));
      const bool is_source = (v == net.source());
      for (const auto& e : net.out_edge_ids(v)) {
        Rng erng(mix_stream(trial_seed, e));
        Packet pk;
        if (is_source)
          pk = code::emit_linear_combination(erng, alt_ptrs, p);
        else if (inputs.empty())
          pk = Packet{std::vector<Element>(p.n + p.r, p.field->zero()), {}};
        else
          pk = code::emit_linear_combination(erng, inputs, p);
        traffic.emplace(e, std::move(pk));
      }
    }
    alt_traffic = std::move(traffic);
  }

  const std::set<std::string> controlled_edges(cfg.set.edges.begin(),
                                               cfg.set.edges.end());
  const std::set<std::string> controlled_nodes(cfg.set.nodes.begin(),
                                               cfg.set.nodes.end());
  std::map<std::string, code::SecretBundle> controlled_secrets;
  if (cfg.secrets_enabled)
    for (const auto& nid : cfg.set.nodes)
      controlled_secrets.emplace(nid, secrets.at(nid));

  Rng adv_rng(stream_seed(trial_seed, 0, "adversary"));
  adv::AttackContext ctx;
  ctx.net = &net;
  ctx.params = &p;
  ctx.controlled_secrets = &controlled_secrets;
  ctx.alt_traffic = alt_traffic ? &*alt_traffic : nullptr;
  ctx.rng = &adv_rng;

  auto place = [&](const std::string& e, Packet pk) {
    res.edge_content_correct[e] = content_matches(pk, x, p);
    res.edge_packets.emplace(e, std::move(pk));
  };

  for (const auto& v : order) {
    const bool is_source = (v == net.source());
    const bool node_controlled = controlled_nodes.count(v) > 0;

    // Verify incoming traffic; honest relays and destinations only mix
    // what passes.  Without secrets everything is accepted.
    std::vector<const Packet*> valids;
    if (!is_source) {
      for (const auto& e : net.in_edge_ids(v)) {
        const Packet& pkt = res.edge_packets.at(e);
        bool ok = true;
        if (cfg.secrets_enabled) {
          const code::Verdict verdict =
              code::verify_packet(pkt, secrets.at(v), p.node_index(v), p);
          ok = (verdict == code::Verdict::Valid);
          if (!node_controlled) {
            const bool correct = res.edge_content_correct.at(e);
            const bool intact = (pkt.h == *authentic_hash);
            res.verifications.push_back({v, e, verdict, correct, intact});
            ++res.verifications_total;
            if (!correct) {
              ++res.corrupted_deliveries;
              if (ok) ++res.false_accepts;
            } else if (!ok && header_nonzero(pkt, p)) {
              ++res.isolation_events;
            }
          }
        }
        if (ok) valids.push_back(&pkt);
      }
    }

    if (net.role(v) == topo::Role::Dest) {
      DestReport dr;
      dr.node = v;
      dr.decode = code::decode(valids, p);
      dr.valid_inputs = static_cast<uint32_t>(valids.size());
      dr.error = dr.decode.status != code::DecodeResult::Status::Ok ||
                 dr.decode.message != res.message;
      if (dr.decode.status != code::DecodeResult::Status::Ok)
        res.rank_failure = true;
      if (dr.error) res.decode_error = true;
      res.dests.push_back(std::move(dr));
    }

    const auto& outs = net.out_edge_ids(v);
    if (outs.empty()) continue;

    // The adversary's causal view: traffic already on the wire before this
    // node transmitted anything.
    std::optional<std::map<std::string, Packet>> snapshot;
    for (const auto& e : outs)
      if (controlled_edges.count(e) && !snapshot) snapshot = res.edge_packets;

    for (const auto& e : outs) {
      Rng erng(mix_stream(trial_seed, e));
      Packet honest;
      if (is_source)
        honest = code::emit_linear_combination(erng, source_ptrs, p);
      else if (valids.empty())
        honest = make_null();
      else
        honest = code::emit_linear_combination(erng, valids, p);

      if (controlled_edges.count(e)) {
        ctx.traffic = &*snapshot;
        Packet forged = adv::corrupt(cfg.strategy, ctx, e, honest);
        auto& views = res.adversary_views[e];
        for (const auto& [eid, pk] : *snapshot) views.push_back(eid);
        place(e, std::move(forged));
      } else {
        place(e, std::move(honest));
      }
    }
  }
  return res;
}

double wilson_halfwidth(uint64_t hits, uint64_t total) {
  if (total == 0) return 0.0;
  const double z = 1.959963985;  // 95% two-sided normal quantile
  const double nd = static_cast<double>(total);
  const double ph = static_cast<double>(hits) / nd;
  const double z2 = z * z;
  return z / (1.0 + z2 / nd) *
         std::sqrt(ph * (1.0 - ph) / nd + z2 / (4.0 * nd * nd));
}

double achieved_rate(uint32_t n, uint64_t r, uint64_t delta) {
  return static_cast<double>(n) * static_cast<double>(r) /
         (static_cast<double>(n) + static_cast<double>(r) +
          static_cast<double>(delta));
}

Report monte_carlo(const TrialConfig& base, uint64_t trials,
                   uint32_t workers) {
  if (workers == 0) workers = 1;
  const CodeParams& p = base.params;

  struct Counts {
    uint64_t decode_errors = 0, rank_failures = 0, verifications = 0,
             corrupted = 0, false_accepts = 0, isolation = 0;
  };
  std::vector<Counts> parts(workers);
  std::vector<std::thread> pool;
  const uint64_t chunk = (trials + workers - 1) / std::max<uint64_t>(workers, 1);
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (uint32_t w = 0; w < workers; ++w) {
    const uint64_t begin = static_cast<uint64_t>(w) * chunk;
    const uint64_t end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, w, begin, end]() {
      try {
        Counts& c = parts[w];
        TrialConfig cfg = base;
        for (uint64_t t = begin; t < end; ++t) {
          cfg.trial_index = t;
          const TrialResult r = run_trial(cfg);
          c.decode_errors += r.decode_error ? 1 : 0;
          c.rank_failures += r.rank_failure ? 1 : 0;
          c.verifications += r.verifications_total;
          c.corrupted += r.corrupted_deliveries;
          c.false_accepts += r.false_accepts;
          c.isolation += r.isolation_events;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  Report rep;
  rep.adversary_set = base.set.label;
  rep.strategy = base.strategy.name();
  rep.trials = trials;
  for (const Counts& c : parts) {
    rep.decode_errors += c.decode_errors;
    rep.rank_failures += c.rank_failures;
    rep.verifications += c.verifications;
    rep.corrupted_deliveries += c.corrupted;
    rep.false_accepts += c.false_accepts;
    rep.isolation_events += c.isolation;
  }
  rep.empirical_pe =
      trials ? static_cast<double>(rep.decode_errors) / trials : 0.0;
  rep.false_accept_rate =
      rep.corrupted_deliveries
          ? static_cast<double>(rep.false_accepts) / rep.corrupted_deliveries
          : 0.0;
  rep.false_accept_halfwidth =
      wilson_halfwidth(rep.false_accepts, rep.corrupted_deliveries);
  rep.forge_bound = std::pow(static_cast<double>(p.field->p()),
                             static_cast<double>(p.n) - p.field->m());
  const uint64_t z_eff = !base.set.nodes.empty()
                             ? base.set.nodes.size()
                             : distinct_tails(*base.net, base.set.edges);
  rep.error_bound = static_cast<double>(z_eff) *
                    static_cast<double>(base.net->max_degree()) *
                    rep.forge_bound;
  rep.cut_bound = static_cast<double>(residual_cut(*base.net, base.set.edges));
  rep.rate = achieved_rate(p.n, p.r, p.delta());
  return rep;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.net == nullptr) throw UsageError("experiment has no network");
  if (cfg.strategies.empty())
    throw UsageError("experiment lists no strategies");
  ExperimentResult out;

  auto [enet, espec] =
      topo::expand_capacities(*cfg.net, cfg.spec, &out.warnings);
  // Node-based specs keep their node identity by re-enumerating on the
  // expanded network; general specs use the translated edge ids.
  const topo::AdversarySpec& enum_spec =
      cfg.spec.kind == topo::AdversarySpec::Kind::NodeBased ? cfg.spec : espec;

  out.params =
      code::derive_params(enet, enum_spec, cfg.n, cfg.m, cfg.p, &out.warnings);
  const std::vector<topo::AdversarySet> sets =
      topo::adversary_sets(enet, enum_spec, nullptr);

  for (const auto& set : sets) {
    for (const auto& strategy : cfg.strategies) {
      TrialConfig base;
      base.net = &enet;
      base.params = out.params;
      base.set = set;
      base.strategy = strategy;
      base.master_seed = cfg.master_seed;
      base.secrets_enabled = cfg.secrets_enabled;
      out.rows.push_back(monte_carlo(base, cfg.trials, cfg.workers));
    }
  }
  return out;
}

SuggestedParams suggest_params(const topo::Network& net,
                               const topo::AdversarySpec& spec, double eps,
                               uint32_t p) {
  auto [enet, espec] = topo::expand_capacities(net, spec, nullptr);
  const topo::AdversarySpec& enum_spec =
      spec.kind == topo::AdversarySpec::Kind::NodeBased ? spec : espec;

  SuggestedParams out;
  out.r = topo::residual_rate(enet, enum_spec, nullptr);
  if (out.r == 0)
    throw ConfigError(
        "the adversary can cut every source-destination path; no rate is "
        "achievable");
  if (!(eps > 0.0) || eps >= static_cast<double>(out.r))
    throw UsageError("eps must lie strictly between 0 and the residual rate");
  out.d_max = enet.max_degree();
  out.delta = (enet.node_count() - 1) * out.r * out.r;
  if (spec.kind == topo::AdversarySpec::Kind::NodeBased) {
    out.z = std::min<uint64_t>(spec.z, enet.internal_node_ids().size());
  } else {
    out.z = 0;
    for (const auto& set : espec.sets)
      out.z = std::max(out.z, distinct_tails(enet, set));
  }

  const double r = static_cast<double>(out.r);
  const double delta = static_cast<double>(out.delta);
  const double union_factor =
      static_cast<double>(out.z) * static_cast<double>(out.d_max);
  for (uint64_t n = 1; n <= 100000000ull; ++n) {
    const double nd = static_cast<double>(n);
    const bool detect_ok =
        union_factor * std::pow(static_cast<double>(p), -nd) < eps;
    const bool rate_ok = nd * r > (r - eps) * (nd + r + delta);
    if (detect_ok && rate_ok) {
      out.n = static_cast<uint32_t>(n);
      out.m = static_cast<uint32_t>(2 * n);
      return out;
    }
  }
  throw ConfigError("no block length satisfies the requested eps");
}

double erasure_bound(const topo::Network& net,
                     const std::vector<std::string>& deleted_edges,
                     uint64_t block_bits, double erasure_prob) {
  if (!(erasure_prob >= 0.0) || erasure_prob >= 1.0)
    throw UsageError("erasure probability must lie in [0, 1)");
  if (block_bits == 0) throw UsageError("block length must be positive");
  const double cut = static_cast<double>(residual_cut(net, deleted_edges));
  double entropy = 0.0;
  if (erasure_prob > 0.0)
    entropy = -erasure_prob * std::log2(erasure_prob) -
              (1.0 - erasure_prob) * std::log2(1.0 - erasure_prob);
  return (cut + entropy / static_cast<double>(block_bits)) /
         (1.0 - erasure_prob);
}

SymmetrizeOutcome symmetrize_demo(const topo::Network& net,
                                  const std::vector<std::string>& set_a,
                                  const std::vector<std::string>& set_b,
                                  const std::vector<uint8_t>& message_a,
                                  const std::vector<uint8_t>& message_b,
                                  uint32_t n, uint32_t m, uint32_t p,
                                  bool with_secrets, uint64_t seed) {
  topo::AdversarySpec spec;
  spec.kind = topo::AdversarySpec::Kind::General;
  spec.sets = {set_a, set_b};
  auto [enet, espec] = topo::expand_capacities(net, spec, nullptr);

  SymmetrizeOutcome out;
  out.secrets_enabled = with_secrets;
  out.params = code::derive_params(enet, espec, n, m, p, nullptr);
  const CodeParams& cp = out.params;
  if (!cp.field->supports_elements())
    throw UsageError("field too large to simulate");

  const size_t want =
      static_cast<size_t>(cp.n) * cp.r * cp.field->byte_length();
  auto parse = [&](const std::vector<uint8_t>& bytes, const char* which) {
    if (bytes.size() != want)
      throw UsageError(std::string("message ") + which + " must encode " +
                       std::to_string(static_cast<size_t>(cp.n) * cp.r) +
                       " field elements (" + std::to_string(want) + " bytes)");
    std::vector<Element> msg;
    const size_t step = cp.field->byte_length();
    for (size_t off = 0; off < bytes.size(); off += step)
      msg.push_back(cp.field->from_bytes({bytes.data() + off, step}));
    return msg;
  };
  const std::vector<Element> msg_a = parse(message_a, "a");
  const std::vector<Element> msg_b = parse(message_b, "b");

  // Both runs must share secrets and mixing streams, so they use one label.
  auto controlled = [&](const std::vector<std::string>& raw) {
    topo::AdversarySet set;
    std::set<std::string> uniq(raw.begin(), raw.end());
    set.edges.assign(uniq.begin(), uniq.end());
    set.label = "confound";
    return set;
  };
  const topo::AdversarySet ctl_a = controlled(espec.sets[0]);
  const topo::AdversarySet ctl_b = controlled(espec.sets[1]);

  auto run = [&](const std::vector<Element>& msg,
                 const std::vector<Element>& alt,
                 const topo::AdversarySet& set) {
    TrialConfig cfg;
    cfg.net = &enet;
    cfg.params = cp;
    cfg.set = set;
    cfg.strategy = adv::Strategy{adv::Strategy::Kind::Symmetrize};
    cfg.master_seed = seed;
    cfg.secrets_enabled = with_secrets;
    cfg.message = msg;
    cfg.alt_message = alt;
    return run_trial(cfg);
  };
  const TrialResult run_a = run(msg_a, msg_b, ctl_b);
  const TrialResult run_b = run(msg_b, msg_a, ctl_a);

  std::string dest_names;
  auto transcript = [&](const TrialResult& r) {
    std::vector<uint8_t> bytes;
    for (const auto& d : enet.destinations())
      for (const auto& e : enet.in_edge_ids(d)) {
        const auto chunk = code::serialize_packet(r.edge_packets.at(e), cp);
        bytes.insert(bytes.end(), chunk.begin(), chunk.end());
      }
    return bytes;
  };
  for (const auto& d : enet.destinations()) {
    if (!dest_names.empty()) dest_names += ",";
    dest_names += d;
  }
  out.dest = dest_names;
  out.transcript_a = transcript(run_a);
  out.transcript_b = transcript(run_b);
  out.transcripts_equal = (out.transcript_a == out.transcript_b);

  const std::set<std::string> dests(enet.destinations().begin(),
                                    enet.destinations().end());
  auto tally = [&](const TrialResult& r, const topo::AdversarySet& set) {
    const std::set<std::string> spliced(set.edges.begin(), set.edges.end());
    for (const auto& rec : r.verifications) {
      if (!dests.count(rec.node) || !spliced.count(rec.edge)) continue;
      ++out.forged_seen;
      if (rec.verdict == code::Verdict::Invalid) ++out.forged_rejected;
    }
  };
  tally(run_a, ctl_b);
  tally(run_b, ctl_a);
  return out;
}

}  // namespace advnet::sim
