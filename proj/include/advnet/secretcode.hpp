#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "advnet/galois.hpp"
#include "advnet/rng.hpp"
#include "advnet/topology.hpp"

namespace advnet::code {

// Code dimensioning shared by every node in a deployment.  A generation
// carries r message rows of n symbols each; every packet is the n+r row
// symbols followed by one r*r hash block per non-source node.
struct CodeParams {
  gf::FieldRef field;
  uint32_t n = 0;                       // message symbols per row
  uint32_t r = 0;                       // rows per generation
  std::vector<std::string> node_order;  // non-source nodes, sorted

  uint32_t delta() const {
    return static_cast<uint32_t>(node_order.size()) * r * r;
  }
  uint32_t packet_len() const { return n + r + delta(); }
  size_t node_index(const std::string& id) const;
};

// Verification secrets held by one node: r evaluation points and r*r
// masking values (d[i*r + j] masks row i against point j).
struct SecretBundle {
  std::vector<gf::Element> s;
  std::vector<gf::Element> d;
};

// The source's row matrix X = [U | I]: r rows of n message symbols with an
// identity coefficient header appended.  Row-major.
struct MessageMatrix {
  uint32_t rows = 0, cols = 0;
  std::vector<gf::Element> a;
  const gf::Element& at(uint32_t i, uint32_t l) const {
    return a[static_cast<size_t>(i) * cols + l];
  }
};

// One packet on one edge: w holds the n payload symbols followed by the
// r coefficient-header symbols; h holds the hash headers for every
// non-source node (empty when the code runs without secrets).
struct Packet {
  std::vector<gf::Element> w;
  std::vector<gf::Element> h;
  bool operator==(const Packet&) const = default;
};

enum class Verdict { Valid, Invalid };

struct DecodeResult {
  enum class Status { Ok, Insufficient, RankDeficient };
  Status status = Status::Insufficient;
  std::vector<gf::Element> message;  // n*r symbols, row-major; set when Ok
};

// Dimension a code for a network/adversary pair: r becomes the residual
// rate (ConfigError when that is zero), node_order the sorted non-source
// nodes.  Warns when m <= n leaves the per-packet detection bound vacuous.
CodeParams derive_params(const topo::Network& net,
                         const topo::AdversarySpec& spec, uint32_t n,
                         uint32_t m, uint32_t p = 2,
                         std::vector<std::string>* warnings = nullptr);

// Fresh secrets for every node in node_order, drawn sequentially from rng.
std::map<std::string, SecretBundle> sample_secrets(Rng& rng,
                                                   const CodeParams& params);

MessageMatrix message_matrix(std::span<const gf::Element> message,
                             const CodeParams& params);

// The r*r hash block one node needs to verify packets of this generation:
// entry (i, j) is d[i][j] minus the additive-polynomial digest of row i
// evaluated at s[j].  One Frobenius chain is shared per column.
std::vector<gf::Element> compute_hash_block(const MessageMatrix& x,
                                            const SecretBundle& bundle,
                                            const CodeParams& params);

// The r packets the source emits: row i of [U | I] plus the concatenated
// hash blocks of every node, identical across the r packets.
std::vector<Packet> source_packets(
    std::span<const gf::Element> message,
    const std::map<std::string, SecretBundle>& secrets,
    const CodeParams& params);

// Linear combination with explicit coefficients; the hash header is copied
// from the first input (all inputs of one generation share it).
Packet combine(std::span<const gf::Element> coeffs,
               const std::vector<const Packet*>& inputs,
               const CodeParams& params);

// Combination with uniformly drawn coefficients, one per input.
Packet emit_linear_combination(Rng& rng,
                               const std::vector<const Packet*>& inputs,
                               const CodeParams& params);

// The receiver-side check: recompute the two digest forms and compare.
// Packets whose coefficient header is all zero are Invalid by convention
// (they claim no combination, so the check would be vacuous).
Verdict verify_packet(const Packet& pkt, const SecretBundle& bundle,
                      size_t node_index, const CodeParams& params);

// The two sides of the verification identity, exposed for analysis:
// first the header-weighted digest of the received symbols, then the
// hash-block reconstruction.  verify_packet accepts iff they are equal.
std::pair<gf::Element, gf::Element> verification_values(
    const Packet& pkt, const SecretBundle& bundle, size_t node_index,
    const CodeParams& params);

// Gaussian elimination on the coefficient headers: recovers the message
// when the headers of the given packets span all r rows.
DecodeResult decode(const std::vector<const Packet*>& packets,
                    const CodeParams& params);

Packet null_packet(const CodeParams& params);
bool is_null(const Packet& pkt);

// Wire encoding: w then h, each element little-endian in
// field->byte_length() bytes.
std::vector<uint8_t> serialize_packet(const Packet& pkt,
                                      const CodeParams& params);

}  // namespace advnet::code
