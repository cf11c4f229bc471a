#include "tmlab/pava.hpp"

#include "tmlab/errors.hpp"

namespace tmlab {

std::vector<double> pava_nonincreasing(const std::vector<double>& y, const std::vector<double>& w) {
  if (y.size() != w.size()) throw InvalidInput("pava: value and weight counts differ");
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(w[i] > 0.0)) throw InvalidInput("pava: weights must be positive");
    blocks.push_back({y[i], w[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean < blocks.back().mean) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      const double wt = a.weight + b.weight;
      a.mean = (a.mean * a.weight + b.mean * b.weight) / wt;
      a.weight = wt;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

}  // namespace tmlab
