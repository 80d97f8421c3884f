#include "advnet/secretcode.hpp"

#include <algorithm>

namespace advnet::code {

namespace {

void check_params(const CodeParams& params) {
  if (!params.field) throw UsageError("code parameters carry no field");
  if (params.n == 0) throw UsageError("code parameter n must be positive");
  if (params.r == 0) throw UsageError("code parameter r must be positive");
  if (params.node_order.empty())
    throw UsageError("code parameters list no verifying nodes");
}

void check_element(const gf::Element& e, const CodeParams& params,
                   const char* what) {
  if (!e.bound() || !e.field()->same(*params.field))
    throw UsageError(std::string(what) +
                     ": element does not belong to the code's field");
}

void check_packet_shape(const Packet& pkt, const CodeParams& params,
                        bool need_hash) {
  if (pkt.w.size() != params.n + params.r)
    throw UsageError("packet has wrong row length");
  if (!pkt.h.empty() && pkt.h.size() != params.delta())
    throw UsageError("packet has wrong hash-header length");
  if (need_hash && pkt.h.empty())
    throw UsageError("packet carries no hash header");
}

void check_bundle(const SecretBundle& bundle, const CodeParams& params) {
  if (bundle.s.size() != params.r ||
      bundle.d.size() != static_cast<size_t>(params.r) * params.r)
    throw UsageError("secret bundle has wrong dimensions");
}

}  // namespace

size_t CodeParams::node_index(const std::string& id) const {
  const auto it = std::lower_bound(node_order.begin(), node_order.end(), id);
  if (it == node_order.end() || *it != id)
    throw UsageError("node not covered by the code: " + id);
  return static_cast<size_t>(it - node_order.begin());
}

CodeParams derive_params(const topo::Network& net,
                         const topo::AdversarySpec& spec, uint32_t n,
                         uint32_t m, uint32_t p,
                         std::vector<std::string>* warnings) {
  if (n == 0) throw UsageError("n must be positive");
  CodeParams params;
  params.field = gf::FieldParams::make(p, m);
  if (!params.field->supports_elements())
    throw UsageError("field too large to simulate (element arithmetic caps "
                     "at 64-bit indexes)");
  const uint64_t r = topo::residual_rate(net, spec, warnings);
  if (r == 0)
    throw ConfigError(
        "adversary can cut every path to some destination; no rate is "
        "achievable");
  params.n = n;
  params.r = static_cast<uint32_t>(r);
  params.node_order = net.non_source_node_ids();
  if (warnings && m <= n)
    warnings->push_back(
        "m <= n: the per-packet forgery bound p^(n-m) is vacuous; "
        "use m > n (customarily m = 2n)");
  return params;
}

std::map<std::string, SecretBundle> sample_secrets(Rng& rng,
                                                   const CodeParams& params) {
  check_params(params);
  std::map<std::string, SecretBundle> out;
  for (const auto& v : params.node_order) {
    SecretBundle b;
    b.s.reserve(params.r);
    b.d.reserve(static_cast<size_t>(params.r) * params.r);
    for (uint32_t i = 0; i < params.r; ++i) b.s.push_back(params.field->sample(rng));
    for (uint32_t i = 0; i < params.r * params.r; ++i)
      b.d.push_back(params.field->sample(rng));
    out.emplace(v, std::move(b));
  }
  return out;
}

MessageMatrix message_matrix(std::span<const gf::Element> message,
                             const CodeParams& params) {
  check_params(params);
  if (message.size() != static_cast<size_t>(params.n) * params.r)
    throw UsageError("message must hold n*r symbols");
  for (const auto& e : message) check_element(e, params, "message_matrix");
  MessageMatrix x;
  x.rows = params.r;
  x.cols = params.n + params.r;
  x.a.assign(static_cast<size_t>(x.rows) * x.cols, params.field->zero());
  for (uint32_t i = 0; i < params.r; ++i) {
    for (uint32_t l = 0; l < params.n; ++l)
      x.a[static_cast<size_t>(i) * x.cols + l] =
          message[static_cast<size_t>(i) * params.n + l];
    x.a[static_cast<size_t>(i) * x.cols + params.n + i] = params.field->one();
  }
  return x;
}

std::vector<gf::Element> compute_hash_block(const MessageMatrix& x,
                                            const SecretBundle& bundle,
                                            const CodeParams& params) {
  check_params(params);
  check_bundle(bundle, params);
  if (x.rows != params.r || x.cols != params.n + params.r)
    throw UsageError("message matrix has wrong dimensions");
  const uint32_t r = params.r, cols = x.cols;
  std::vector<gf::Element> digest(static_cast<size_t>(r) * r,
                                  params.field->zero());
  // Column j shares one Frobenius chain over s[j] across all rows.
  for (uint32_t j = 0; j < r; ++j) {
    gf::Element t = bundle.s[j];
    for (uint32_t l = 1; l <= cols; ++l) {
      t = t.frobenius();
      for (uint32_t i = 0; i < r; ++i)
        digest[static_cast<size_t>(i) * r + j] += x.at(i, l - 1) * t;
    }
  }
  std::vector<gf::Element> h(static_cast<size_t>(r) * r);
  for (size_t k = 0; k < h.size(); ++k) h[k] = bundle.d[k] - digest[k];
  return h;
}

std::vector<Packet> source_packets(
    std::span<const gf::Element> message,
    const std::map<std::string, SecretBundle>& secrets,
    const CodeParams& params) {
  check_params(params);
  const MessageMatrix x = message_matrix(message, params);
  std::vector<gf::Element> h;
  h.reserve(params.delta());
  for (const auto& v : params.node_order) {
    const auto it = secrets.find(v);
    if (it == secrets.end())
      throw UsageError("no secret bundle for node " + v);
    const auto block = compute_hash_block(x, it->second, params);
    h.insert(h.end(), block.begin(), block.end());
  }
  std::vector<Packet> out(params.r);
  for (uint32_t i = 0; i < params.r; ++i) {
    out[i].w.assign(x.a.begin() + static_cast<size_t>(i) * x.cols,
                    x.a.begin() + static_cast<size_t>(i + 1) * x.cols);
    out[i].h = h;
  }
  return out;
}

Packet combine(std::span<const gf::Element> coeffs,
               const std::vector<const Packet*>& inputs,
               const CodeParams& params) {
  check_params(params);
  if (inputs.empty()) throw UsageError("combine: no input packets");
  if (coeffs.size() != inputs.size())
    throw UsageError("combine: one coefficient per input packet required");
  const size_t hash_len = inputs[0]->h.size();
  for (const Packet* p : inputs) {
    check_packet_shape(*p, params, false);
    if (p->h.size() != hash_len)
      throw UsageError("combine: inputs disagree on hash-header presence");
  }
  for (const auto& c : coeffs) check_element(c, params, "combine");

  Packet out;
  out.w.assign(params.n + params.r, params.field->zero());
  for (size_t k = 0; k < inputs.size(); ++k)
    for (size_t l = 0; l < out.w.size(); ++l)
      out.w[l] += coeffs[k] * inputs[k]->w[l];
  // Hash headers ride along unmodified; every authentic packet of a
  // generation carries the same ones.
  out.h = inputs[0]->h;
  return out;
}

Packet emit_linear_combination(Rng& rng,
                               const std::vector<const Packet*>& inputs,
                               const CodeParams& params) {
  check_params(params);
  if (inputs.empty())
    throw UsageError("emit_linear_combination: no input packets");
  std::vector<gf::Element> coeffs;
  coeffs.reserve(inputs.size());
  for (size_t k = 0; k < inputs.size(); ++k)
    coeffs.push_back(params.field->sample(rng));
  return combine(coeffs, inputs, params);
}

std::pair<gf::Element, gf::Element> verification_values(
    const Packet& pkt, const SecretBundle& bundle, size_t node_index,
    const CodeParams& params) {
  check_params(params);
  check_bundle(bundle, params);
  check_packet_shape(pkt, params, true);
  if (node_index >= params.node_order.size())
    throw UsageError("node index out of range");
  const uint32_t n = params.n, r = params.r;

  // Indicator-masked secret sum: rows with a zero header coefficient do
  // not contribute their evaluation point.
  gf::Element s_sum = params.field->zero();
  for (uint32_t i = 0; i < r; ++i)
    if (!pkt.w[n + i].is_zero()) s_sum += bundle.s[i];

  // Q1: digest of the received row at the masked point.
  gf::Element q1 = params.field->zero();
  gf::Element t = s_sum;
  for (uint32_t l = 1; l <= n + r; ++l) {
    t = t.frobenius();
    q1 += pkt.w[l - 1] * t;
  }

  // Q2: header-weighted reconstruction from the node's own hash block.
  const size_t base = node_index * static_cast<size_t>(r) * r;
  gf::Element q2 = params.field->zero();
  for (uint32_t i = 0; i < r; ++i) {
    if (pkt.w[n + i].is_zero()) continue;
    gf::Element inner = params.field->zero();
    for (uint32_t j = 0; j < r; ++j) {
      if (pkt.w[n + j].is_zero()) continue;
      inner += bundle.d[static_cast<size_t>(i) * r + j] -
               pkt.h[base + static_cast<size_t>(i) * r + j];
    }
    q2 += pkt.w[n + i] * inner;
  }
  return {q1, q2};
}

Verdict verify_packet(const Packet& pkt, const SecretBundle& bundle,
                      size_t node_index, const CodeParams& params) {
  check_params(params);
  check_packet_shape(pkt, params, true);
  bool any_nonzero = false;
  for (uint32_t i = 0; i < params.r; ++i)
    if (!pkt.w[params.n + i].is_zero()) any_nonzero = true;
  if (!any_nonzero) return Verdict::Invalid;
  const auto [q1, q2] = verification_values(pkt, bundle, node_index, params);
  return q1 == q2 ? Verdict::Valid : Verdict::Invalid;
}

DecodeResult decode(const std::vector<const Packet*>& packets,
                    const CodeParams& params) {
  check_params(params);
  const uint32_t n = params.n, r = params.r;
  DecodeResult res;
  if (packets.size() < r) {
    res.status = DecodeResult::Status::Insufficient;
    return res;
  }
  for (const Packet* p : packets) check_packet_shape(*p, params, false);

  // Augmented rows [T | Y]: T the coefficient headers, Y the full rows.
  const size_t k = packets.size();
  std::vector<std::vector<gf::Element>> t(k), y(k);
  for (size_t i = 0; i < k; ++i) {
    t[i].assign(packets[i]->w.begin() + n, packets[i]->w.end());
    y[i].assign(packets[i]->w.begin(), packets[i]->w.end());
  }

  for (uint32_t col = 0; col < r; ++col) {
    size_t pivot = col;
    while (pivot < k && t[pivot][col].is_zero()) ++pivot;
    if (pivot == k) {
      res.status = DecodeResult::Status::RankDeficient;
      return res;
    }
    std::swap(t[col], t[pivot]);
    std::swap(y[col], y[pivot]);
    const gf::Element inv = t[col][col].inverse();
    for (auto& e : t[col]) e *= inv;
    for (auto& e : y[col]) e *= inv;
    for (size_t row = 0; row < k; ++row) {
      if (row == col || t[row][col].is_zero()) continue;
      const gf::Element f = t[row][col];
      for (uint32_t c = 0; c < r; ++c) t[row][c] -= f * t[col][c];
      for (size_t c = 0; c < y[row].size(); ++c) y[row][c] -= f * y[col][c];
    }
  }

  res.status = DecodeResult::Status::Ok;
  res.message.reserve(static_cast<size_t>(n) * r);
  for (uint32_t i = 0; i < r; ++i)
    for (uint32_t l = 0; l < n; ++l) res.message.push_back(y[i][l]);
  return res;
}

Packet null_packet(const CodeParams& params) {
  check_params(params);
  Packet p;
  p.w.assign(params.n + params.r, params.field->zero());
  p.h.assign(params.delta(), params.field->zero());
  return p;
}

bool is_null(const Packet& pkt) {
  for (const auto& e : pkt.w)
    if (!e.is_zero()) return false;
  for (const auto& e : pkt.h)
    if (!e.is_zero()) return false;
  return true;
}

std::vector<uint8_t> serialize_packet(const Packet& pkt,
                                      const CodeParams& params) {
  check_params(params);
  check_packet_shape(pkt, params, false);
  std::vector<uint8_t> out;
  out.reserve((pkt.w.size() + pkt.h.size()) * params.field->byte_length());
  for (const auto& e : pkt.w) {
    const auto b = e.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
  }
  for (const auto& e : pkt.h) {
    const auto b = e.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace advnet::code
