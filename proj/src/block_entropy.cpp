#include "infoloss/block_entropy.hpp"

#include <string>

#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"

namespace infoloss {

BlockEnumerator::BlockEnumerator(const JointChain& chain, Options options) : chain_(&chain), options_(options) {
  if (options_.output_stage == SIZE_MAX) options_.output_stage = chain.stage_count() - 1;
  if (options_.output_stage >= chain.stage_count()) throw ValidationError("output stage out of range");
  const auto& pi = chain.stationary();
  for (std::uint32_t s = 0; s < pi.size(); ++s) {
    if (pi[s] <= 0.0) continue;
    entries_.push_back({s, pi[s]});
    if (options_.observe_initial_state) node_end_.push_back(entries_.size());
  }
  if (!options_.observe_initial_state) node_end_.push_back(entries_.size());
  entropy_ = options_.observe_initial_state ? initial_state_entropy(chain) : 0.0;
  peak_entries_ = entries_.size();
}

void BlockEnumerator::advance(Observe what) {
  const JointChain& chain = *chain_;
  const std::size_t nx = chain.source().size();
  const std::size_t ny = chain.system().stages()[options_.output_stage].output.size();
  const std::size_t labels = what == Observe::kNothing ? 1
                             : what == Observe::kInput ? nx
                             : what == Observe::kOutput ? ny
                                                        : nx * ny;
  const std::size_t stage = options_.output_stage;
  const bool last_stage = stage + 1 == chain.stage_count();

  std::vector<std::vector<Entry>> buckets(labels);
  std::vector<std::uint32_t> slot(chain.state_count(), UINT32_MAX);
  std::vector<Entry> next_entries;
  std::vector<std::size_t> next_end;
  next_entries.reserve(entries_.size() * 2);
  CompensatedSum entropy;
  double pruned = 0.0;

  std::size_t begin = 0;
  for (std::size_t end : node_end_) {
    for (auto& b : buckets) b.clear();
    for (std::size_t e = begin; e < end; ++e) {
      const Entry& entry = entries_[e];
      const std::size_t first_arc = chain.arc_index(entry.state);
      const auto arcs = chain.arcs(entry.state);
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        const JointArc& arc = arcs[a];
        const Symbol y = last_stage ? arc.y : chain.stage_output(first_arc + a, stage);
        std::size_t label = 0;
        switch (what) {
          case Observe::kNothing: break;
          case Observe::kInput: label = arc.x; break;
          case Observe::kOutput: label = y; break;
          case Observe::kJoint: label = std::size_t{arc.x} * ny + y; break;
        }
        buckets[label].push_back({arc.next, entry.p * arc.probability});
      }
    }
    begin = end;
    for (auto& bucket : buckets) {
      if (bucket.empty()) continue;
      const std::size_t node_begin = next_entries.size();
      for (const Entry& entry : bucket) {
        std::uint32_t& pos = slot[entry.state];
        if (pos == UINT32_MAX) {
          pos = static_cast<std::uint32_t>(next_entries.size() - node_begin);
          next_entries.push_back(entry);
        } else {
          next_entries[node_begin + pos].p += entry.p;
        }
      }
      double mass = 0.0;
      std::size_t write = node_begin;
      for (std::size_t i = node_begin; i < next_entries.size(); ++i) {
        slot[next_entries[i].state] = UINT32_MAX;
        if (next_entries[i].p < kPruneThreshold) {
          pruned += next_entries[i].p;
          continue;
        }
        mass += next_entries[i].p;
        next_entries[write++] = next_entries[i];
      }
      next_entries.resize(write);
      if (write == node_begin) continue;
      entropy.add(neg_plogp(mass));
      next_end.push_back(next_entries.size());
      if (next_entries.size() > options_.path_cap) {
        throw ResourceError("block enumeration exceeds path cap at length " + std::to_string(length_ + 1),
                            next_entries.size(), options_.path_cap);
      }
    }
  }
  entries_.swap(next_entries);
  node_end_.swap(next_end);
  entropy_ = entropy.value();
  pruned_mass_ += pruned;
  ++length_;
  peak_entries_ = std::max<std::uint64_t>(peak_entries_, entries_.size());
}

std::vector<double> block_entropy_profile(const JointChain& chain, std::span<const Observe> schedule,
                                          BlockEnumerator::Options options) {
  BlockEnumerator walker(chain, options);
  std::vector<double> out;
  out.reserve(schedule.size());
  for (Observe o : schedule) {
    walker.advance(o);
    out.push_back(walker.entropy());
  }
  return out;
}

double exact_block_entropy(const JointChain& chain, std::size_t n, Which which, std::uint64_t path_cap) {
  if (n == 0) throw ValidationError("block length must be at least 1");
  const Observe o = which == Which::kX ? Observe::kInput : which == Which::kY ? Observe::kOutput : Observe::kJoint;
  const std::vector<Observe> schedule(n, o);
  BlockEnumerator::Options options;
  options.path_cap = path_cap;
  return block_entropy_profile(chain, schedule, options).back();
}

double initial_state_entropy(const JointChain& chain) { return entropy_bits(chain.stationary()); }

}  // namespace infoloss
