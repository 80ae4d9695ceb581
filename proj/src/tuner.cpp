#include "geonas/tuner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "geonas/errors.hpp"
#include "geonas/gp.hpp"
#include "geonas/rng.hpp"

namespace geonas::tuner {

using ordered_json = nlohmann::ordered_json;

ScoreBreakdown score(double H_h, long long Np_h, const ReferenceConfig& ref) {
    if (!(ref.H > 0.0)) throw ConfigError("reference validation loss must be positive");
    if (ref.Np <= 0) throw ConfigError("reference parameter count must be positive");
    ScoreBreakdown s;
    s.relative_error = (H_h - ref.H) / ref.H;
    s.relative_size_decrease =
        (static_cast<double>(ref.Np) - static_cast<double>(Np_h)) / static_cast<double>(ref.Np);
    s.total = s.relative_error - s.relative_size_decrease;
    return s;
}

double ucb(double mean, double std, double alpha) {
    if (std < 0.0) throw ConfigError("ucb std must be non-negative");
    return mean - alpha * std;
}

void SearchBudget::validate() const {
    if (max_trials < 1) throw ConfigError("max_trials must be positive");
    if (exhaustion_window < 1) throw ConfigError("exhaustion_window must be positive");
    if (initial_random < 1) throw ConfigError("initial_random must be positive");
    if (initial_random > max_trials)
        throw ConfigError("initial_random must not exceed max_trials");
    if (!(ucb_alpha > 0.0)) throw ConfigError("ucb_alpha must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-search memo: guarantees at most one evaluator call per distinct h.
class TrialCache {
public:
    explicit TrialCache(const TrialEvaluator& eval) : eval_(eval) {}

    bool contains(const HyperparamSet& h) const { return seen_.count(h) > 0; }
    size_t distinct() const { return seen_.size(); }

    /// Evaluate h (first time only) and append the resulting record.
    void evaluate(const HyperparamSet& h, const ReferenceConfig& ref, const std::string& strategy,
                  uint64_t seed, std::vector<TrialRecord>& trials) {
        TrialRecord rec;
        rec.strategy = strategy;
        rec.iteration = static_cast<int>(trials.size()) + 1;
        rec.h = h;
        rec.seed = seed;
        try {
            const EvalOutcome out = eval_(h);
            rec.H = out.H;
            rec.Np = out.Np;
            rec.score = score(out.H, out.Np, ref);
            rec.epochs = out.epochs;
            rec.wall_seconds = out.wall_seconds;
            rec.stop_reason = out.stop_reason;
            if (out.seed != 0) rec.seed = out.seed;
        } catch (const std::exception&) {
            rec.failed = true;
            rec.H = kInf;
            rec.Np = 0;
            rec.score = {kInf, 0.0, kInf};
            rec.stop_reason = "failed";
        }
        seen_.insert(h);
        trials.push_back(std::move(rec));
    }

private:
    const TrialEvaluator& eval_;
    std::set<HyperparamSet> seen_;
};

SearchResult finish(std::vector<TrialRecord> trials) {
    if (trials.empty()) throw ConfigError("search produced no trials");
    const TrialRecord* best = &trials.front();
    for (const auto& t : trials) {
        if (t.score.total < best->score.total ||
            (t.score.total == best->score.total && t.h < best->h))
            best = &t;
    }
    SearchResult r;
    r.best = best->h;
    r.best_score = best->score;
    r.trials = std::move(trials);
    return r;
}

}  // namespace

SearchResult grid_search(const SearchSpace& space, const TrialEvaluator& eval,
                         const ReferenceConfig& ref, uint64_t seed) {
    TrialCache cache(eval);
    std::vector<TrialRecord> trials;
    for (const auto& h : space.enumerate()) cache.evaluate(h, ref, "grid", seed, trials);
    return finish(std::move(trials));
}

SearchResult random_search(const SearchSpace& space, const TrialEvaluator& eval,
                           const ReferenceConfig& ref, const SearchBudget& budget) {
    budget.validate();
    Rng rng(budget.seed);
    TrialCache cache(eval);
    std::vector<TrialRecord> trials;
    long long consecutive_repeats = 0;
    long long draws = 0;
    // Termination is the repeat window or the trial budget; full coverage is
    // not an early exit, so even a fully explored space keeps drawing until
    // the window fills (a covered space can only produce repeats).
    while (static_cast<int>(cache.distinct()) < budget.max_trials) {
        const HyperparamSet h = space.at_index(rng.below(space.cardinality()));
        ++draws;
        if (cache.contains(h)) {
            if (++consecutive_repeats >= budget.exhaustion_window) break;
            continue;
        }
        consecutive_repeats = 0;
        cache.evaluate(h, ref, "random", budget.seed, trials);
    }
    SearchResult res = finish(std::move(trials));
    res.random_draws = draws;
    return res;
}

SearchResult bayesian_search(const SearchSpace& space, const TrialEvaluator& eval,
                             const ReferenceConfig& ref, const SearchBudget& budget) {
    budget.validate();
    Rng rng(budget.seed);
    TrialCache cache(eval);
    std::vector<TrialRecord> trials;

    const auto all = space.enumerate();
    auto draw_unevaluated = [&]() -> HyperparamSet {
        for (;;) {
            const HyperparamSet h = space.at_index(rng.below(space.cardinality()));
            if (!cache.contains(h)) return h;
        }
    };

    while (static_cast<int>(cache.distinct()) < budget.initial_random &&
           static_cast<int>(cache.distinct()) < budget.max_trials &&
           cache.distinct() < space.cardinality())
        cache.evaluate(draw_unevaluated(), ref, "bayesian", budget.seed, trials);

    while (static_cast<int>(cache.distinct()) < budget.max_trials &&
           cache.distinct() < space.cardinality()) {
        // Observations for the surrogate: every finite-scored trial so far.
        std::vector<gp::Point> xs;
        std::vector<double> ys;
        for (const auto& t : trials) {
            if (std::isfinite(t.score.total)) {
                xs.push_back(space.encode(t.h));
                ys.push_back(t.score.total);
            }
        }

        HyperparamSet pick;
        std::string strategy = "bayesian";
        bool picked = false;
        if (!xs.empty()) {
            try {
                const gp::GPModel model = gp::GPModel::fit(xs, ys);
                std::vector<gp::Point> queries;
                std::vector<size_t> query_idx;
                for (size_t i = 0; i < all.size(); ++i) {
                    if (!cache.contains(all[i])) {
                        queries.push_back(space.encode(all[i]));
                        query_idx.push_back(i);
                    }
                }
                const auto post = model.posterior(queries);
                size_t best_i = 0;
                double best_u = kInf;
                for (size_t i = 0; i < post.size(); ++i) {
                    const double u = ucb(post[i].mean, post[i].std, budget.ucb_alpha);
                    if (u < best_u) {
                        best_u = u;
                        best_i = i;
                    }
                }
                pick = all[query_idx[best_i]];
                picked = true;
            } catch (const SingularKernelError&) {
                picked = false;
            }
        }
        if (!picked) {
            pick = draw_unevaluated();
            strategy = "bayesian_fallback";
        }
        cache.evaluate(pick, ref, strategy, budget.seed, trials);
    }
    return finish(std::move(trials));
}

namespace {

ordered_json point_json(const SearchSpace& space, const HyperparamSet& h) {
    ordered_json j = ordered_json::object();
    for (size_t d = 0; d < space.dim_count(); ++d) j[space.dims()[d].name] = h[d];
    return j;
}

ordered_json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

}  // namespace

std::string trial_to_json(const SearchSpace& space, const TrialRecord& rec) {
    ordered_json j;
    j["strategy"] = rec.strategy;
    j["iteration"] = rec.iteration;
    j["h"] = point_json(space, rec.h);
    j["H"] = finite_or_null(rec.H);
    j["Np"] = rec.Np;
    j["score_error_term"] = finite_or_null(rec.score.relative_error);
    j["score_size_term"] = finite_or_null(rec.score.relative_size_decrease);
    j["score_total"] = finite_or_null(rec.score.total);
    j["epochs"] = rec.epochs;
    j["wall_seconds"] = rec.wall_seconds;
    j["stop_reason"] = rec.stop_reason;
    j["seed"] = rec.seed;
    return j.dump();
}

void write_trial_log(const std::filesystem::path& path, const SearchSpace& space,
                     const std::vector<TrialRecord>& trials) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open trial log for writing: " + path.string());
    for (const auto& t : trials) f << trial_to_json(space, t) << "\n";
    if (!f) throw IoError("failed writing trial log: " + path.string());
}

void write_score_scatter_csv(const std::filesystem::path& path,
                             const std::vector<TrialRecord>& trials) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open scatter csv for writing: " + path.string());
    f << "Trainable_Parameters,Score,Score_loss,Score_unknowns\n";
    for (const auto& t : trials) {
        if (t.failed || !std::isfinite(t.score.total)) continue;
        f << t.Np << "," << format_double(t.score.total) << ","
          << format_double(t.score.relative_error) << ","
          << format_double(-t.score.relative_size_decrease) << "\n";
    }
    if (!f) throw IoError("failed writing scatter csv: " + path.string());
}

}  // namespace geonas::tuner
