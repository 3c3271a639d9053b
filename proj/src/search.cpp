#include "mti/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include <gmpxx.h>
#include <spdlog/spdlog.h>

namespace mti {

SearchBudgetExceeded::SearchBudgetExceeded(std::uint64_t budget, const Epsilon& eps)
    : Error("search budget of " + std::to_string(budget) + " maps exceeded at epsilon " + eps.value().to_string()),
      budget_(budget) {}

void validate(const SearchConfig& cfg) {
  if (cfg.max_maps == 0) throw Error("max_maps must be at least 1");
}

std::string_view to_string(Direction d) { return d == Direction::FToG ? "f->g" : "g->f"; }

Direction choose_direction(std::size_t eta_f, std::size_t eta_g) {
  mpz_class g_pow_f;
  mpz_class f_pow_g;
  mpz_ui_pow_ui(g_pow_f.get_mpz_t(), eta_g, eta_f);
  mpz_ui_pow_ui(f_pow_g.get_mpz_t(), eta_f, eta_g);
  return g_pow_f <= f_pow_g ? Direction::FToG : Direction::GToF;
}

Direction choose_direction(const MergeTree& mf, const MergeTree& mg) {
  return choose_direction(mf.leaves().size(), mg.leaves().size());
}

std::size_t InterleaveResult::kappa() const {
  return refined_target_sizes.empty() ? 0 : *std::max_element(refined_target_sizes.begin(), refined_target_sizes.end());
}

namespace {

using Lists = std::vector<std::vector<std::size_t>>;

/// Advances the odometer over digits [from, n); the last digit is least
/// significant. Returns false after the final combination.
bool advance(std::vector<std::size_t>& digits, const Lists& lists, std::size_t from) {
  for (std::size_t i = digits.size(); i-- > from;) {
    if (++digits[i] < lists[i].size()) return true;
    digits[i] = 0;
  }
  return false;
}

std::vector<std::size_t> to_choice(const std::vector<std::size_t>& digits, const Lists& lists) {
  std::vector<std::size_t> choice(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) choice[i] = lists[i][digits[i]];
  return choice;
}

struct Found {
  std::vector<std::size_t> choice;
  std::uint64_t maps = 0;
};

std::optional<Found> enumerate_sequential(const SearchContext& ctx, const Lists& lists, const SearchConfig& cfg,
                                          std::uint64_t& maps) {
  std::vector<std::size_t> digits(lists.size(), 0);
  auto scratch = ctx.make_scratch();
  do {
    if (maps >= cfg.max_maps) throw SearchBudgetExceeded(cfg.max_maps, ctx.epsilon());
    ++maps;
    auto choice = to_choice(digits, lists);
    if (ctx.accepts(choice, scratch)) return Found{std::move(choice), maps};
  } while (advance(digits, lists, 0));
  return std::nullopt;
}

std::optional<Found> enumerate_parallel(const SearchContext& ctx, const Lists& lists, const SearchConfig& cfg,
                                        std::uint64_t& maps) {
  // Work items are the combinations of the leading `prefix` digits.
  const std::size_t prefix = std::min<std::size_t>(2, lists.size());
  std::size_t items = 1;
  for (std::size_t i = 0; i < prefix; ++i) items *= lists[i].size();

  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> evaluated{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> over_budget{false};
  std::mutex mu;
  std::optional<Found> found;

  auto worker = [&] {
    auto scratch = ctx.make_scratch();
    std::vector<std::size_t> digits(lists.size(), 0);
    while (!stop.load(std::memory_order_relaxed)) {
      std::size_t item = next.fetch_add(1);
      if (item >= items) return;
      for (std::size_t i = prefix; i-- > 0;) {
        digits[i] = item % lists[i].size();
        item /= lists[i].size();
      }
      std::fill(digits.begin() + static_cast<std::ptrdiff_t>(prefix), digits.end(), 0);
      do {
        if (stop.load(std::memory_order_relaxed)) return;
        if (evaluated.fetch_add(1) >= cfg.max_maps) {
          evaluated.fetch_sub(1);
          over_budget = true;
          stop = true;
          return;
        }
        auto choice = to_choice(digits, lists);
        if (ctx.accepts(choice, scratch)) {
          std::lock_guard lock(mu);
          if (!found) found = Found{std::move(choice), 0};
          stop = true;
          return;
        }
      } while (advance(digits, lists, prefix));
    }
  };

  unsigned n = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, items));
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  maps += evaluated.load();
  if (found) {
    found->maps = maps;
    return found;
  }
  if (over_budget) throw SearchBudgetExceeded(cfg.max_maps, ctx.epsilon());
  return std::nullopt;
}

void check_witness(const Witness& w) {
  const MergeTree& src = w.aug.source;
  const MergeTree& tgt = w.aug.target;
  for (const auto& n : src.nodes()) {
    const NodeId img = w.map.at(n.id);
    if (tgt.value(img) != n.value + w.epsilon.value()) {
      throw InternalError("range shift fails at " + to_string(n.id));
    }
    if (n.parent && !tgt.is_ancestor(w.map.at(*n.parent), img)) {
      throw InternalError("map is not ancestor-preserving at " + to_string(n.id));
    }
  }
}

}  // namespace

InterleaveResult is_eps_interleaved(const MergeTree& mf, const MergeTree& mg, const Epsilon& eps,
                                    const SearchConfig& cfg) {
  validate(cfg);
  InterleaveResult out;
  out.direction = choose_direction(mf, mg);
  const MergeTree& src = out.direction == Direction::FToG ? mf : mg;
  const MergeTree& tgt = out.direction == Direction::FToG ? mg : mf;

  if (tgt.value(tgt.leaves().front()) - src.value(src.leaves().front()) > eps.value()) {
    out.early_exit = "leaf-gap";
    return out;
  }

  AugmentedPair aug = extend_and_augment(src, tgt, eps);
  const SearchContext ctx(aug, eps);

  Lists lists(ctx.leaf_count());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (cfg.refinement) {
      lists[i] = ctx.refined(i);
    } else {
      lists[i].resize(ctx.targets(i).size());
      std::iota(lists[i].begin(), lists[i].end(), std::size_t{0});
    }
    out.refined_target_sizes.push_back(lists[i].size());
  }
  for (const auto& l : lists) {
    if (l.empty()) {
      out.early_exit = "empty-targets";
      return out;
    }
  }

  const bool parallel = cfg.parallel && !cfg.deterministic_witness;
  auto found = parallel ? enumerate_parallel(ctx, lists, cfg, out.maps_enumerated)
                        : enumerate_sequential(ctx, lists, cfg, out.maps_enumerated);
  spdlog::debug("epsilon {}: {} maps, kappa {}, {}", eps.value().to_string(), out.maps_enumerated, out.kappa(),
                found ? "interleaved" : "not interleaved");
  if (!found) return out;

  LeafAssignment assignment = ctx.assignment(found->choice);
  auto map = construct_map(assignment, aug, ctx.tables());
  if (!map || !is_eps_good(*map, aug, ctx.tables(), eps)) {
    throw InternalError("accepted assignment fails the full map check");
  }
  out.interleaved = true;
  out.witness = Witness{out.direction, eps, std::move(aug), std::move(assignment), std::move(*map)};
  check_witness(*out.witness);
  return out;
}

DistanceReport compute_interleaving_distance(const MergeTree& mf, const MergeTree& mg, const SearchConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const CandidateList pi = generate_candidates(mf, mg);
  DistanceReport report;
  report.candidate_count = pi.size();

  std::ptrdiff_t lo = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(pi.size()) - 1;
  std::optional<std::size_t> best;
  while (lo <= hi) {
    const std::ptrdiff_t mid = lo + (hi - lo) / 2;
    const Epsilon& eps = pi[static_cast<std::size_t>(mid)];
    InterleaveResult r = is_eps_interleaved(mf, mg, eps, cfg);
    report.trace.push_back(TraceEntry{eps, r.interleaved, r.maps_enumerated, r.kappa()});
    report.total_maps += r.maps_enumerated;
    if (r.interleaved) {
      best = static_cast<std::size_t>(mid);
      report.witness = std::move(r.witness);
      hi = mid - 1;
    } else {
      lo = mid + 1;
    }
  }
  if (!best) throw InternalError("trees are not interleaved at the largest candidate value");
  report.epsilon_star = pi[*best];
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

}  // namespace mti
