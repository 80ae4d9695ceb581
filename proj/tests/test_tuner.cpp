#include <doctest.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "geonas/errors.hpp"
#include "geonas/rng.hpp"
#include "geonas/tuner.hpp"

using namespace geonas;
using namespace geonas::tuner;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

SearchSpace grid9() {
    return SearchSpace({{"a", {0, 1, 2}}, {"b", {0, 1, 2}}});
}

ReferenceConfig unit_ref() {
    ReferenceConfig ref;
    ref.h = {0, 0};
    ref.H = 1.0;
    ref.Np = 100;
    return ref;
}

/// Quadratic bowl with its minimum at {1,2}; parameter count constant.
EvalOutcome bowl_eval(const HyperparamSet& h) {
    EvalOutcome out;
    out.H = 1.0 + (h[0] - 1.0) * (h[0] - 1.0) + (h[1] - 2.0) * (h[1] - 2.0);
    out.Np = 100;
    out.epochs = 1;
    out.stop_reason = "max_epochs";
    return out;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "geonas_tuner_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("the score is zero at the reference and scales both terms") {
    const ReferenceConfig ref{{0}, 2.0, 100};
    const ScoreBreakdown at_ref = score(2.0, 100, ref);
    CHECK(at_ref.relative_error == 0.0);
    CHECK(at_ref.relative_size_decrease == 0.0);
    CHECK(at_ref.total == 0.0);

    const ScoreBreakdown half_size = score(2.0, 50, ref);
    CHECK(half_size.total == doctest::Approx(-0.5).epsilon(1e-12));

    const ScoreBreakdown double_loss = score(4.0, 100, ref);
    CHECK(double_loss.total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the score is monotone in loss and in size") {
    const ReferenceConfig ref{{0}, 3.0, 1000};
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double h1 = rng.uniform(0.1, 10.0);
        const double h2 = h1 + rng.uniform(0.0, 5.0);
        const long long n1 = 1 + static_cast<long long>(rng.below(5000));
        const long long n2 = n1 + static_cast<long long>(rng.below(5000));
        CHECK(score(h1, n1, ref).total <= score(h2, n1, ref).total);
        CHECK(score(h1, n1, ref).total <= score(h1, n2, ref).total);
    }
}

TEST_CASE("the score rejects degenerate references") {
    CHECK_THROWS_AS(score(1.0, 10, ReferenceConfig{{0}, 0.0, 100}), ConfigError);
    CHECK_THROWS_AS(score(1.0, 10, ReferenceConfig{{0}, 1.0, 0}), ConfigError);
}

TEST_CASE("ucb subtracts the scaled uncertainty and rejects negative spread") {
    CHECK(ucb(1.0, 2.0, 2.6) == doctest::Approx(1.0 - 5.2));
    CHECK(ucb(0.5, 0.0, 2.6) == 0.5);
    CHECK_THROWS_AS(ucb(0.0, -1.0, 2.6), ConfigError);
}

TEST_CASE("budget validation refuses nonsensical settings") {
    SearchBudget b;
    b.max_trials = 0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = SearchBudget{};
    b.exhaustion_window = 0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = SearchBudget{};
    b.max_trials = 3;
    b.initial_random = 4;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = SearchBudget{};
    b.ucb_alpha = 0.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
}

TEST_CASE("grid search sweeps the space in order and finds the bowl minimum") {
    const SearchSpace space = grid9();
    std::map<HyperparamSet, int> calls;
    const TrialEvaluator eval = [&](const HyperparamSet& h) {
        ++calls[h];
        return bowl_eval(h);
    };
    const SearchResult res = grid_search(space, eval, unit_ref());
    CHECK(res.best == HyperparamSet{1, 2});
    CHECK(res.best_score.total == doctest::Approx(0.0));
    REQUIRE(res.trials.size() == 9);
    const auto all = space.enumerate();
    for (size_t i = 0; i < 9; ++i) {
        CHECK(res.trials[i].h == all[i]);
        CHECK(res.trials[i].iteration == static_cast<int>(i) + 1);
        CHECK(res.trials[i].strategy == "grid");
        CHECK_FALSE(res.trials[i].failed);
    }
    for (const auto& [h, n] : calls) CHECK(n == 1);
    CHECK(calls.size() == 9);
}

TEST_CASE("score ties break to the lexicographically smallest point") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet&) {
        EvalOutcome out;
        out.H = 1.0;
        out.Np = 100;
        return out;
    };
    const SearchResult res = grid_search(space, eval, unit_ref());
    CHECK(res.best == HyperparamSet{0, 0});
}

TEST_CASE("a throwing evaluator marks the trial failed and is skipped") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet& h) {
        if (h == HyperparamSet{1, 2}) throw std::runtime_error("boom");
        return bowl_eval(h);
    };
    const SearchResult res = grid_search(space, eval, unit_ref());
    // With the true minimum failing, the three tied H=2 points remain and
    // the lexicographically smallest of them wins.
    CHECK(res.best == HyperparamSet{0, 2});

    int failed = 0;
    for (const auto& t : res.trials) {
        if (!t.failed) continue;
        ++failed;
        CHECK(t.h == HyperparamSet{1, 2});
        CHECK(t.H == kInf);
        CHECK(t.score.total == kInf);
        CHECK(t.stop_reason == "failed");
    }
    CHECK(failed == 1);
}

TEST_CASE("when every trial fails the search degrades to the first point") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet&) -> EvalOutcome {
        throw std::runtime_error("all down");
    };
    const SearchResult res = grid_search(space, eval, unit_ref());
    CHECK(res.best == HyperparamSet{0, 0});
    CHECK(res.best_score.total == kInf);
}

TEST_CASE("random search on a single point evaluates once then drains the window") {
    const SearchSpace space({{"only", {7}}});
    int calls = 0;
    const TrialEvaluator eval = [&](const HyperparamSet& h) {
        ++calls;
        return bowl_eval({h[0], 0});
    };
    SearchBudget budget;
    budget.max_trials = 12;
    budget.exhaustion_window = 5;
    budget.seed = 17;
    const SearchResult res = random_search(space, eval, unit_ref(), budget);
    CHECK(calls == 1);
    CHECK(res.trials.size() == 1);
    CHECK(res.random_draws == 6);  // the hit plus five consecutive repeats
    CHECK(res.best == HyperparamSet{7});
}

TEST_CASE("random search with an unbounded window covers the space exactly once") {
    const SearchSpace space = grid9();
    std::map<HyperparamSet, int> calls;
    const TrialEvaluator eval = [&](const HyperparamSet& h) {
        ++calls[h];
        return bowl_eval(h);
    };
    SearchBudget budget;
    budget.max_trials = 9;
    budget.exhaustion_window = LLONG_MAX;
    budget.seed = 23;
    const SearchResult res = random_search(space, eval, unit_ref(), budget);
    CHECK(res.trials.size() == 9);
    CHECK(calls.size() == 9);
    for (const auto& [h, n] : calls) CHECK(n == 1);
    CHECK(res.best == grid_search(space, eval, unit_ref()).best);
    CHECK(res.best == HyperparamSet{1, 2});
}

TEST_CASE("random search stops at the trial budget") {
    const SearchSpace space = grid9();
    int calls = 0;
    const TrialEvaluator eval = [&](const HyperparamSet& h) {
        ++calls;
        return bowl_eval(h);
    };
    SearchBudget budget;
    budget.max_trials = 3;
    budget.initial_random = 3;
    budget.exhaustion_window = LLONG_MAX;
    budget.seed = 29;
    const SearchResult res = random_search(space, eval, unit_ref(), budget);
    CHECK(calls == 3);
    CHECK(res.trials.size() == 3);
    std::set<HyperparamSet> seen;
    for (const auto& t : res.trials) seen.insert(t.h);
    CHECK(seen.size() == 3);
}

TEST_CASE("random search replays identically per seed") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet& h) { return bowl_eval(h); };
    SearchBudget budget;
    budget.max_trials = 6;
    budget.seed = 31;
    const SearchResult a = random_search(space, eval, unit_ref(), budget);
    const SearchResult b = random_search(space, eval, unit_ref(), budget);
    REQUIRE(a.trials.size() == b.trials.size());
    for (size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].h == b.trials[i].h);
    CHECK(a.random_draws == b.random_draws);
}

TEST_CASE("bayesian search with a full budget reproduces the grid argmin") {
    const SearchSpace space = grid9();
    std::map<HyperparamSet, int> calls;
    const TrialEvaluator eval = [&](const HyperparamSet& h) {
        ++calls[h];
        return bowl_eval(h);
    };
    SearchBudget budget;
    budget.max_trials = 9;
    budget.initial_random = 5;
    budget.seed = 37;
    const SearchResult res = bayesian_search(space, eval, unit_ref(), budget);
    CHECK(res.trials.size() == 9);
    CHECK(calls.size() == 9);
    for (const auto& [h, n] : calls) CHECK(n == 1);
    CHECK(res.best == HyperparamSet{1, 2});
    for (const auto& t : res.trials)
        CHECK((t.strategy == "bayesian" || t.strategy == "bayesian_fallback"));
}

TEST_CASE("bayesian search replays identically per seed") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet& h) { return bowl_eval(h); };
    SearchBudget budget;
    budget.max_trials = 7;
    budget.initial_random = 4;
    budget.seed = 43;
    const SearchResult a = bayesian_search(space, eval, unit_ref(), budget);
    const SearchResult b = bayesian_search(space, eval, unit_ref(), budget);
    REQUIRE(a.trials.size() == b.trials.size());
    for (size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(a.trials[i].h == b.trials[i].h);
        CHECK(a.trials[i].strategy == b.trials[i].strategy);
    }
}

TEST_CASE("bayesian search tolerates failed warm-up trials") {
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet& h) {
        if (h[0] == 0) throw std::runtime_error("unstable");
        return bowl_eval(h);
    };
    SearchBudget budget;
    budget.max_trials = 9;
    budget.initial_random = 5;
    budget.seed = 47;
    const SearchResult res = bayesian_search(space, eval, unit_ref(), budget);
    CHECK(res.trials.size() == 9);
    CHECK(res.best == HyperparamSet{1, 2});
}

TEST_CASE("trials carry the evaluator's seed when it reports one") {
    const SearchSpace space({{"only", {1, 2}}});
    const TrialEvaluator with_seed = [](const HyperparamSet& h) {
        EvalOutcome out = bowl_eval({h[0], 0});
        out.seed = 777;
        return out;
    };
    const SearchResult res = grid_search(space, with_seed, unit_ref(), 55);
    for (const auto& t : res.trials) CHECK(t.seed == 777);

    const TrialEvaluator without_seed = [](const HyperparamSet& h) {
        return bowl_eval({h[0], 0});
    };
    const SearchResult res2 = grid_search(space, without_seed, unit_ref(), 55);
    for (const auto& t : res2.trials) CHECK(t.seed == 55);
}

TEST_CASE("trial records render as stable one-line JSON") {
    const SearchSpace space = SearchSpace::inverse_space();
    TrialRecord rec;
    rec.strategy = "grid";
    rec.iteration = 1;
    rec.h = {1, 3, 3};
    rec.H = 0.5;
    rec.Np = 1000;
    rec.score = {0.25, 0.5, -0.25};
    rec.epochs = 7;
    rec.wall_seconds = 0.0;
    rec.stop_reason = "early_stop";
    rec.seed = 42;
    CHECK(trial_to_json(space, rec) ==
          "{\"strategy\":\"grid\",\"iteration\":1,\"h\":{\"n\":1,\"k0\":3,\"k1\":3},"
          "\"H\":0.5,\"Np\":1000,\"score_error_term\":0.25,\"score_size_term\":0.5,"
          "\"score_total\":-0.25,\"epochs\":7,\"wall_seconds\":0.0,"
          "\"stop_reason\":\"early_stop\",\"seed\":42}");

    rec.H = kInf;
    rec.score = {kInf, 0.0, kInf};
    const std::string line = trial_to_json(space, rec);
    const auto j = nlohmann::json::parse(line);
    CHECK(j["H"].is_null());
    CHECK(j["score_total"].is_null());
    CHECK(j["score_size_term"] == 0.0);
}

TEST_CASE("the trial log and scatter files agree with the records") {
    const auto dir = temp_dir();
    const SearchSpace space = grid9();
    const TrialEvaluator eval = [](const HyperparamSet& h) {
        if (h == HyperparamSet{2, 2}) throw std::runtime_error("skip me");
        EvalOutcome out = bowl_eval(h);
        out.Np = 50 + 10 * h[0];
        return out;
    };
    const ReferenceConfig ref = unit_ref();
    const SearchResult res = grid_search(space, eval, ref);

    const auto log_path = dir / "trials.jsonl";
    write_trial_log(log_path, space, res.trials);
    std::ifstream in(log_path);
    REQUIRE(in.good());
    std::string line;
    size_t rows = 0, failed_rows = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        if (j["H"].is_null()) {
            ++failed_rows;
        } else {
            // Every logged score is recomputable from its own H and Np.
            const ScoreBreakdown s = score(j["H"].get<double>(), j["Np"].get<long long>(), ref);
            CHECK(std::fabs(s.total - j["score_total"].get<double>()) < 1e-12);
        }
        ++rows;
    }
    CHECK(rows == res.trials.size());
    CHECK(failed_rows == 1);

    const auto scatter_path = dir / "scatter.csv";
    write_score_scatter_csv(scatter_path, res.trials);
    std::ifstream sc(scatter_path);
    REQUIRE(sc.good());
    std::getline(sc, line);
    CHECK(line == "Trainable_Parameters,Score,Score_loss,Score_unknowns");
    size_t data_rows = 0;
    while (std::getline(sc, line))
        if (!line.empty()) ++data_rows;
    CHECK(data_rows == res.trials.size() - 1);  // the failed trial is omitted
}
