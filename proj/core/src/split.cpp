#include "vtinv/split.hpp"

#include "vtinv/error.hpp"
#include "vtinv/rng.hpp"

namespace vtinv {

SplitAssignment split_corpus(std::span<const SequenceKey> ids, std::uint64_t seed) {
  if (ids.size() < 10) {
    throw ContractError("split_corpus: need at least 10 sequences, got " +
                        std::to_string(ids.size()));
  }
  std::vector<SequenceKey> order(ids.begin(), ids.end());
  Rng rng(seed);
  rng.shuffle(std::span(order));

  const std::size_t n_val = ids.size() / 10;
  const std::size_t n_test = ids.size() / 10;
  const std::size_t n_train = ids.size() - n_val - n_test;

  SplitAssignment split;
  auto first = order.begin();
  split.train.assign(first, first + static_cast<std::ptrdiff_t>(n_train));
  split.validation.assign(first + static_cast<std::ptrdiff_t>(n_train),
                          first + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(first + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
  return split;
}

}  // namespace vtinv
