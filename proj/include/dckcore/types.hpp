#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dckcore {

using NodeId = std::uint32_t;
using ExternalId = std::int64_t;
using Coreness = std::uint32_t;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

// Error hierarchy. Every library failure is reported through one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class PlanningError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class MergeError : public Error {
 public:
  MergeError(const std::string& what, std::vector<ExternalId> overlaps,
             std::vector<ExternalId> gaps)
      : Error(what), overlaps_(std::move(overlaps)), gaps_(std::move(gaps)) {}
  const std::vector<ExternalId>& overlaps() const noexcept { return overlaps_; }
  const std::vector<ExternalId>& gaps() const noexcept { return gaps_; }

 private:
  std::vector<ExternalId> overlaps_;
  std::vector<ExternalId> gaps_;
};

/// Per-node count of neighbors that live in already-separated higher-core
/// parts. Indexed by the internal id of the graph being decomposed.
struct ExternalInfo {
  std::vector<Coreness> counts;

  static ExternalInfo zeros(std::size_t n) { return {std::vector<Coreness>(n, 0)}; }

  std::size_t size() const noexcept { return counts.size(); }
  Coreness operator[](NodeId v) const { return counts[v]; }
  std::span<const Coreness> view() const noexcept { return counts; }

  friend bool operator==(const ExternalInfo&, const ExternalInfo&) = default;
};

/// A (node, coreness) pair inside a partial result.
struct NodeCoreness {
  NodeId node;
  Coreness value;

  friend bool operator==(const NodeCoreness&, const NodeCoreness&) = default;
};

}  // namespace dckcore
