#include "infoloss/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

constexpr std::uint64_t kThetaLimit = std::uint64_t{1} << 62;
constexpr std::uint64_t kFlattenTableLimit = std::uint64_t{1} << 24;

// base^exp, or nullopt once the value passes `limit`.
std::optional<std::uint64_t> checked_power(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > limit / base) return std::nullopt;
    v *= base;
  }
  return v;
}

std::optional<std::uint64_t> table_size(const Stage& s, std::uint64_t limit) {
  auto a = checked_power(s.input.size(), s.input_memory + 1, limit);
  auto b = checked_power(s.output.size(), s.output_memory, limit);
  if (!a || !b || (*b != 0 && *a > limit / *b)) return std::nullopt;
  return *a * *b;
}

void validate_stage(const Stage& s) {
  if (s.tabulated()) {
    const auto expected = table_size(s, std::numeric_limits<std::uint32_t>::max());
    if (!expected) throw ResourceError("update table too large", 0, std::numeric_limits<std::uint32_t>::max());
    if (s.table.size() != *expected) {
      throw ValidationError("update table has " + std::to_string(s.table.size()) + " entries, expected " +
                            std::to_string(*expected));
    }
    for (std::size_t i = 0; i < s.table.size(); ++i) {
      if (s.table[i] >= s.output.size()) {
        throw ValidationError("update table entry " + std::to_string(i) + " outside output alphabet");
      }
    }
  }
}

// Visits every digit tuple of the given radices in mixed-radix order.
template <class Fn>
void for_each_tuple(std::span<const std::size_t> radices, Fn&& fn) {
  std::vector<Symbol> digits(radices.size(), 0);
  while (true) {
    fn(std::span<const Symbol>(digits));
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (++digits[i] < radices[i]) break;
      digits[i] = 0;
      if (i == 0) return;
    }
    if (digits.empty()) return;
  }
}

}  // namespace

std::uint64_t Stage::table_index(std::span<const Symbol> inputs, std::span<const Symbol> outputs) const {
  std::uint64_t idx = 0;
  for (Symbol d : inputs) idx = idx * input.size() + d;
  for (Symbol d : outputs) idx = idx * output.size() + d;
  return idx;
}

Symbol Stage::apply(std::span<const Symbol> inputs, std::span<const Symbol> outputs) const {
  if (function) {
    const Symbol y = function(inputs, outputs);
    if (y >= output.size()) throw ValidationError("update function returned a symbol outside the output alphabet");
    return y;
  }
  return table[table_index(inputs, outputs)];
}

SystemSpec SystemSpec::from_table(Alphabet input, Alphabet output, std::size_t N, std::size_t M,
                                  std::vector<Symbol> table) {
  Stage s{std::move(input), std::move(output), N, M, std::move(table), {}};
  validate_stage(s);
  return SystemSpec(std::make_shared<const std::vector<Stage>>(std::vector<Stage>{std::move(s)}));
}

SystemSpec SystemSpec::tabulate(Alphabet input, Alphabet output, std::size_t N, std::size_t M,
                                const UpdateFunction& f) {
  Stage probe{input, output, N, M, {}, {}};
  const auto size = table_size(probe, kFlattenTableLimit * 16);
  if (!size) throw ResourceError("update table too large to tabulate", 0, kFlattenTableLimit * 16);
  std::vector<std::size_t> radices(N + 1, input.size());
  radices.insert(radices.end(), M, output.size());
  std::vector<Symbol> table;
  table.reserve(*size);
  for_each_tuple(radices, [&](std::span<const Symbol> d) {
    const Symbol y = f(d.first(N + 1), d.subspan(N + 1));
    if (y >= output.size()) throw ValidationError("update function returned a symbol outside the output alphabet");
    table.push_back(y);
  });
  return from_table(std::move(input), std::move(output), N, M, std::move(table));
}

SystemSpec SystemSpec::opaque(Alphabet input, Alphabet output, std::size_t N, std::size_t M, UpdateFunction f) {
  if (!f) throw ValidationError("opaque system requires an update function");
  Stage s{std::move(input), std::move(output), N, M, {}, std::move(f)};
  return SystemSpec(std::make_shared<const std::vector<Stage>>(std::vector<Stage>{std::move(s)}));
}

SystemSpec SystemSpec::from_stages(std::vector<Stage> stages) {
  if (stages.empty()) throw ValidationError("a system needs at least one stage");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    validate_stage(stages[i]);
    if (i > 0 && !(stages[i - 1].output == stages[i].input)) {
      throw ValidationError("stage " + std::to_string(i) + " input alphabet does not match stage " +
                            std::to_string(i - 1) + " output alphabet");
    }
  }
  return SystemSpec(std::make_shared<const std::vector<Stage>>(std::move(stages)));
}

std::size_t SystemSpec::input_memory() const {
  std::size_t n = 0;
  for (const auto& s : *stages_) n += s.input_memory;
  return n;
}

bool SystemSpec::is_table() const {
  return std::all_of(stages_->begin(), stages_->end(), [](const Stage& s) { return s.tabulated(); });
}

const std::vector<Symbol>& SystemSpec::table() const {
  if (is_composite() || !is_table()) throw UnsupportedAnalysis("system has no single update table");
  return stages_->front().table;
}

std::vector<std::size_t> SystemSpec::stage_buffer_lengths() const {
  const auto& st = *stages_;
  std::vector<std::size_t> lens(st.size());
  for (std::size_t i = 0; i < st.size(); ++i) {
    lens[i] = st[i].output_memory;
    if (i + 1 < st.size()) lens[i] = std::max(lens[i], st[i + 1].input_memory);
  }
  return lens;
}

SystemState SystemSpec::zero_state() const {
  std::size_t out = 0;
  for (auto l : stage_buffer_lengths()) out += l;
  return SystemState{std::vector<Symbol>(input_buffer_length(), 0), std::vector<Symbol>(out, 0)};
}

void SystemSpec::validate_state(const SystemState& state) const {
  if (state.recent_inputs.size() != input_buffer_length()) {
    throw ValidationError("state input buffer must hold " + std::to_string(input_buffer_length()) + " symbols");
  }
  require_symbols(input_alphabet(), state.recent_inputs, "state input buffer");
  const auto lens = stage_buffer_lengths();
  std::size_t total = 0;
  for (auto l : lens) total += l;
  if (state.recent_outputs.size() != total) {
    throw ValidationError("state output buffer must hold " + std::to_string(total) + " symbols");
  }
  std::size_t off = 0;
  for (std::size_t i = 0; i < lens.size(); ++i) {
    require_symbols((*stages_)[i].output,
                    std::span<const Symbol>(state.recent_outputs).subspan(off, lens[i]), "state output buffer");
    off += lens[i];
  }
}

Symbol SystemSpec::step(SystemState& state, Symbol x, std::span<Symbol> stage_outputs) const {
  const auto& st = *stages_;
  const auto lens = stage_buffer_lengths();
  std::vector<Symbol> hist_in, hist_out, produced(st.size());
  Symbol current = x;
  std::span<const Symbol> prev_segment = state.recent_inputs;
  std::size_t off = 0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const Stage& s = st[i];
    std::span<const Symbol> segment = std::span<const Symbol>(state.recent_outputs).subspan(off, lens[i]);
    hist_in.assign(prev_segment.end() - static_cast<std::ptrdiff_t>(s.input_memory), prev_segment.end());
    hist_in.push_back(current);
    hist_out.assign(segment.end() - static_cast<std::ptrdiff_t>(s.output_memory), segment.end());
    current = s.apply(hist_in, hist_out);
    produced[i] = current;
    prev_segment = segment;
    off += lens[i];
  }
  auto shift_in = [](std::span<Symbol> buf, Symbol v) {
    if (buf.empty()) return;
    std::shift_left(buf.begin(), buf.end(), 1);
    buf.back() = v;
  };
  shift_in(state.recent_inputs, x);
  off = 0;
  for (std::size_t i = 0; i < st.size(); ++i) {
    shift_in(std::span<Symbol>(state.recent_outputs).subspan(off, lens[i]), produced[i]);
    off += lens[i];
  }
  if (!stage_outputs.empty()) std::copy_n(produced.begin(), std::min(stage_outputs.size(), produced.size()), stage_outputs.begin());
  return current;
}

void SystemSpec::require_exact(const char* what) const {
  if (!is_table()) throw UnsupportedAnalysis(std::string(what) + " requires a table-mode system");
}

std::uint64_t SystemSpec::theta_count() const {
  require_exact("theta enumeration");
  const auto head = checked_power(input_alphabet().size(), input_buffer_length(), kThetaLimit);
  bool ok = head.has_value();
  std::uint64_t count = ok ? *head : 0;
  const auto lens = stage_buffer_lengths();
  for (std::size_t i = 0; i < lens.size() && ok; ++i) {
    const auto part = checked_power((*stages_)[i].output.size(), lens[i], kThetaLimit);
    ok = part && (*part == 0 || count <= kThetaLimit / *part);
    if (ok) count *= *part;
  }
  if (!ok) throw ResourceError("state space too large to enumerate", kThetaLimit, kThetaLimit);
  return count;
}

std::uint64_t SystemSpec::encode(const SystemState& state) const {
  std::uint64_t theta = 0;
  for (Symbol d : state.recent_inputs) theta = theta * input_alphabet().size() + d;
  const auto lens = stage_buffer_lengths();
  std::size_t off = 0;
  for (std::size_t i = 0; i < lens.size(); ++i) {
    for (std::size_t j = 0; j < lens[i]; ++j) theta = theta * (*stages_)[i].output.size() + state.recent_outputs[off + j];
    off += lens[i];
  }
  return theta;
}

SystemState SystemSpec::decode(std::uint64_t theta) const {
  SystemState state = zero_state();
  const auto lens = stage_buffer_lengths();
  std::size_t end = state.recent_outputs.size();
  for (std::size_t i = lens.size(); i-- > 0;) {
    const std::uint64_t radix = (*stages_)[i].output.size();
    for (std::size_t j = 0; j < lens[i]; ++j) {
      state.recent_outputs[--end] = static_cast<Symbol>(theta % radix);
      theta /= radix;
    }
  }
  const std::uint64_t radix = input_alphabet().size();
  for (std::size_t j = state.recent_inputs.size(); j-- > 0;) {
    state.recent_inputs[j] = static_cast<Symbol>(theta % radix);
    theta /= radix;
  }
  return state;
}

Symbol SystemSpec::respond(std::uint64_t theta, Symbol x) const {
  SystemState s = decode(theta);
  return step(s, x);
}

ParamView::ParamView(SystemSpec parent, std::uint64_t theta) : parent_(std::move(parent)), theta_(theta) {
  if (theta_ >= parent_.theta_count()) throw ValidationError("theta outside the state space");
}

ParamView::ParamView(SystemSpec parent, const SystemState& theta) : parent_(std::move(parent)), theta_(0) {
  parent_.validate_state(theta);
  theta_ = parent_.encode(theta);
}

Symbol ParamView::operator()(Symbol x) const {
  if (!parent_.input_alphabet().contains(x)) throw ValidationError("input symbol outside alphabet");
  return parent_.respond(theta_, x);
}

std::vector<Symbol> ParamView::preimage(Symbol y) const {
  std::vector<Symbol> out;
  for (Symbol x = 0; x < parent_.input_alphabet().size(); ++x) {
    if ((*this)(x) == y) out.push_back(x);
  }
  return out;
}

SymbolSequence simulate(const SystemSpec& system, std::span<const Symbol> input) {
  return simulate(system, input, system.zero_state());
}

SymbolSequence simulate(const SystemSpec& system, std::span<const Symbol> input, SystemState init) {
  require_symbols(system.input_alphabet(), input, "simulate input");
  system.validate_state(init);
  SymbolSequence out;
  out.reserve(input.size());
  for (Symbol x : input) out.push_back(system.step(init, x));
  return out;
}

std::size_t max_preimage_size(const SystemSpec& system) {
  const std::uint64_t count = system.theta_count();
  const std::size_t nx = system.input_alphabet().size();
  std::vector<std::size_t> hits(system.output_alphabet().size());
  std::size_t best = 0;
  for (std::uint64_t theta = 0; theta < count; ++theta) {
    std::fill(hits.begin(), hits.end(), 0);
    for (Symbol x = 0; x < nx; ++x) best = std::max(best, ++hits[system.respond(theta, x)]);
  }
  return best;
}

double preimage_bound(const SystemSpec& system) {
  return std::log2(static_cast<double>(max_preimage_size(system)));
}

PartialInverse::PartialInverse(SystemSpec system, std::vector<Symbol> table)
    : system_(std::move(system)), table_(std::move(table)) {
  if (table_.size() != system_.theta_count() * system_.output_alphabet().size()) {
    throw ValidationError("inverse table has the wrong size");
  }
}

InvertibilityVerdict check_partial_invertibility(const SystemSpec& system) {
  const std::uint64_t count = system.theta_count();
  const std::size_t nx = system.input_alphabet().size();
  const std::size_t ny = system.output_alphabet().size();
  std::vector<Symbol> outs(nx);
  std::vector<Symbol> inverse(count * ny, PartialInverse::kNoPreimage);
  for (std::uint64_t theta = 0; theta < count; ++theta) {
    for (Symbol x = 0; x < nx; ++x) outs[x] = system.respond(theta, x);
    for (Symbol x = 0; x < nx; ++x) {
      Symbol& slot = inverse[theta * ny + outs[x]];
      if (slot != PartialInverse::kNoPreimage) {
        // The first collision found while scanning x upward has the smallest x'
        // but possibly not the smallest x; pick the smallest x with a duplicate.
        for (Symbol a = 0; a < nx; ++a) {
          for (Symbol b = a + 1; b < nx; ++b) {
            if (outs[a] == outs[b]) return InvertibilityVerdict{false, Collision{theta, a, b}, nullptr};
          }
        }
      }
      slot = x;
    }
  }
  return InvertibilityVerdict{true, std::nullopt,
                              std::make_shared<const PartialInverse>(system, std::move(inverse))};
}

SystemSpec cascade(const SystemSpec& first, const SystemSpec& second) {
  if (!(first.output_alphabet() == second.input_alphabet())) {
    throw ValidationError("cascade: first system's output alphabet differs from second system's input alphabet");
  }
  std::vector<Stage> stages = first.stages();
  stages.insert(stages.end(), second.stages().begin(), second.stages().end());

  const bool flattenable =
      std::all_of(stages.begin(), stages.end(), [](const Stage& s) { return s.tabulated(); }) &&
      std::all_of(stages.begin(), stages.end() - 1, [](const Stage& s) { return s.output_memory == 0; });
  bool zero_preserving = true;
  for (std::size_t i = 0; flattenable && i + 1 < stages.size(); ++i) {
    if (stages[i + 1].input_memory == 0) continue;
    const std::vector<Symbol> zeros(stages[i].input_memory + 1, 0);
    zero_preserving = zero_preserving && stages[i].apply(zeros, {}) == 0;
  }
  if (flattenable && zero_preserving) {
    std::size_t total_n = 0;
    for (const auto& s : stages) total_n += s.input_memory;
    const Stage& last = stages.back();
    Stage probe{stages.front().input, last.output, total_n, last.output_memory, {}, {}};
    if (table_size(probe, kFlattenTableLimit)) {
      auto shared = std::make_shared<const std::vector<Stage>>(stages);
      UpdateFunction composed = [shared](std::span<const Symbol> inputs, std::span<const Symbol> outputs) {
        const auto& st = *shared;
        std::vector<Symbol> seq(inputs.begin(), inputs.end()), next;
        for (std::size_t i = 0; i + 1 < st.size(); ++i) {
          const std::size_t n = st[i].input_memory;
          next.clear();
          for (std::size_t j = n; j < seq.size(); ++j) {
            next.push_back(st[i].apply(std::span<const Symbol>(seq).subspan(j - n, n + 1), {}));
          }
          seq.swap(next);
        }
        return st.back().apply(seq, outputs);
      };
      return SystemSpec::tabulate(stages.front().input, last.output, total_n, last.output_memory, composed);
    }
  }
  return SystemSpec::from_stages(std::move(stages));
}

}  // namespace infoloss
