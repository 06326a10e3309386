#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vtinv/corpus.hpp"

namespace vtinv {

struct SplitAssignment {
  std::vector<SequenceKey> train;
  std::vector<SequenceKey> validation;
  std::vector<SequenceKey> test;
};

/// Seeded Fisher-Yates shuffle, then floor(n/10) sequences each to validation
/// and test; the remainder goes to train. Identical for a given seed on every
/// platform. Needs at least 10 sequences.
SplitAssignment split_corpus(std::span<const SequenceKey> ids, std::uint64_t seed);

}  // namespace vtinv
