#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "geonas/arch.hpp"

namespace geonas::tuner {

using arch::HyperparamSet;
using arch::ReferenceConfig;
using arch::SearchSpace;

/// The two terms of the architecture score and their difference:
/// total = relative_error - relative_size_decrease.
struct ScoreBreakdown {
    double relative_error = 0.0;
    double relative_size_decrease = 0.0;
    double total = 0.0;
};

ScoreBreakdown score(double H_h, long long Np_h, const ReferenceConfig& ref);

/// Everything a trial evaluation reports back to the search.
struct EvalOutcome {
    double H = 0.0;
    long long Np = 0;
    int epochs = 0;
    double wall_seconds = 0.0;
    std::string stop_reason;
    uint64_t seed = 0;  // the seed the evaluation actually used, for the log
};

/// Maps a hyperparameter set to its evaluation. Must be deterministic per
/// (h, seed); a thrown exception marks the trial failed (score +inf).
using TrialEvaluator = std::function<EvalOutcome(const HyperparamSet&)>;

struct TrialRecord {
    std::string strategy;
    int iteration = 0;  // 1-based evaluation index within the search
    HyperparamSet h;
    double H = 0.0;
    long long Np = 0;
    ScoreBreakdown score;
    int epochs = 0;
    double wall_seconds = 0.0;
    std::string stop_reason;
    uint64_t seed = 0;
    bool failed = false;
};

struct SearchBudget {
    int max_trials = 1;
    long long exhaustion_window = 5;  // consecutive repeat draws ending a random search
    int initial_random = 5;           // Bayesian warm-up evaluations
    double ucb_alpha = 2.6;
    uint64_t seed = 0;

    void validate() const;
};

struct SearchResult {
    HyperparamSet best;
    ScoreBreakdown best_score;
    std::vector<TrialRecord> trials;
    long long random_draws = 0;  // uniform draws a random_search consumed
};

/// Exhaustive evaluation in enumeration order; the oracle the sampling
/// strategies are checked against. Ties break to the lexicographically
/// smallest h.
SearchResult grid_search(const SearchSpace& space, const TrialEvaluator& eval,
                         const ReferenceConfig& ref, uint64_t seed = 0);

/// Uniform sampling with caching: an already-evaluated draw counts as a
/// repeat and is not re-evaluated; `exhaustion_window` consecutive repeats
/// or max_trials evaluations terminate the search.
SearchResult random_search(const SearchSpace& space, const TrialEvaluator& eval,
                           const ReferenceConfig& ref, const SearchBudget& budget);

/// Lower confidence value used for minimization: mean - alpha * std.
double ucb(double mean, double std, double alpha);

/// Warm-up with initial_random uniform distinct evaluations, then repeat:
/// fit the GP surrogate on (encoded h, score.total), take the posterior over
/// every unevaluated h, evaluate the argmin-UCB point. Never re-evaluates an
/// h; a GP failure falls back to a uniform random pick for that iteration
/// (recorded with strategy "bayesian_fallback").
SearchResult bayesian_search(const SearchSpace& space, const TrialEvaluator& eval,
                             const ReferenceConfig& ref, const SearchBudget& budget);

/// One JSON object per line, fields: strategy, iteration, h, H, Np,
/// score_error_term, score_size_term, score_total, epochs, wall_seconds,
/// stop_reason, seed. Non-finite numbers render as null.
std::string trial_to_json(const SearchSpace& space, const TrialRecord& rec);

void write_trial_log(const std::filesystem::path& path, const SearchSpace& space,
                     const std::vector<TrialRecord>& trials);

/// Score-vs-size scatter: columns Trainable_Parameters, Score, Score_loss,
/// Score_unknowns. Failed trials are omitted.
void write_score_scatter_csv(const std::filesystem::path& path,
                             const std::vector<TrialRecord>& trials);

}  // namespace geonas::tuner
