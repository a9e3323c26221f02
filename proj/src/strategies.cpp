#include "col/strategies.hpp"

#include <deque>

#include "col/errors.hpp"
#include "col/formula.hpp"

namespace col {

namespace {

bool is_negation_of(const ExprPtr& n, const ExprPtr& e) {
  return n->kind == ExprKind::kNeg && structurally_equal(*n->children[0], *e);
}

// all x. all y. A | ~A
bool decision_problem(const Expr& e) {
  if (e.kind != ExprKind::kChall) return false;
  const Expr& inner = *e.children[0];
  if (inner.kind != ExprKind::kChall) return false;
  const Expr& body = *inner.children[0];
  return body.kind == ExprKind::kChor &&
         is_negation_of(body.children[1], body.children[0]);
}

[[noreturn]] void mismatch(const char* strategy, const char* shape, const Expr& e) {
  throw ShapeMismatch(std::string(strategy) + " plays " + shape + ", not " + render(e));
}

std::optional<std::uint64_t> bot_pick(const LabeledMove& m, std::string_view prefix) {
  if (m.player != Player::kBot || !m.move.starts_with(prefix)) return std::nullopt;
  return parse_numeral(std::string_view(m.move).substr(prefix.size()));
}

class Copycat final : public Strategy {
 public:
  StepResult step(RunView newly_observed) override {
    for (const auto& m : newly_observed) {
      if (m.player != Player::kBot || m.move.size() < 2 || m.move[1] != '.') continue;
      if (m.move[0] == '0') pending_.push_back("1" + m.move.substr(1));
      if (m.move[0] == '1') pending_.push_back("0" + m.move.substr(1));
    }
    StepResult r;
    if (!pending_.empty()) {
      r.emitted = pending_.front();
      pending_.pop_front();
    }
    r.busy = !pending_.empty();
    return r;
  }
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<Copycat>(*this);
  }

 private:
  std::deque<Move> pending_;
};

class HaltToAccept final : public Strategy {
 public:
  explicit HaltToAccept(std::shared_ptr<const Catalog> c) : catalog_(std::move(c)) {}

  StepResult step(RunView newly_observed) override {
    for (const auto& m : newly_observed) {
      if (m.player != Player::kBot) continue;
      if (auto v = bot_pick(m, "1."); v && picks_.size() < 2) {
        // mirror k and n into the antecedent
        picks_.push_back(*v);
        pending_.push_back("0." + numeral(*v));
      } else if (picks_.size() == 2 && !asked_ && (m.move == "0.0" || m.move == "0.1")) {
        asked_ = true;
        if (m.move == "0.1") {
          pending_.push_back("1.1");
        } else if (picks_[0] < catalog_->size()) {
          runner_.emplace(catalog_->at(picks_[0]), picks_[1]);
        }
        // a claimed halt of a machine outside the catalog is a lie; stay put
      }
    }
    if (runner_) {
      if (auto h = runner_->run(kSimulationSlice)) {
        pending_.push_back(h->accept ? "1.0" : "1.1");
        runner_.reset();
      }
    }
    StepResult r;
    if (!pending_.empty()) {
      r.emitted = pending_.front();
      pending_.pop_front();
    }
    r.busy = !pending_.empty() || runner_.has_value();
    return r;
  }
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<HaltToAccept>(*this);
  }

 private:
  std::shared_ptr<const Catalog> catalog_;
  std::vector<std::uint64_t> picks_;
  bool asked_ = false;
  std::deque<Move> pending_;
  std::optional<ToyRunner> runner_;
};

class Kolmogorov final : public Strategy {
 public:
  explicit Kolmogorov(std::shared_ptr<const Catalog> c) : catalog_(std::move(c)) {}

  StepResult step(RunView newly_observed) override {
    std::string answer_prefix = "0." + numeral(i_) + ".";
    for (const auto& m : newly_observed) {
      if (m.player != Player::kBot) continue;
      if (auto t = bot_pick(m, "1."); t && phase_ == Phase::kIdle) {
        target_ = *t;
        phase_ = Phase::kAskX;
      } else if (phase_ == Phase::kAwait && m.move == answer_prefix + "1") {
        next_machine();
      } else if (phase_ == Phase::kAwait && m.move == answer_prefix + "0") {
        if (i_ < catalog_->size()) {
          runner_.emplace(catalog_->at(i_), 0);
          phase_ = Phase::kSimulate;
        } else {
          phase_ = Phase::kStuck;
        }
      }
    }
    StepResult r;
    if (phase_ == Phase::kSimulate) {
      if (auto h = runner_->run(kSimulationSlice)) {
        runner_.reset();
        if (h->output == target_) {
          r.emitted = "1." + numeral(i_);
          phase_ = Phase::kDone;
        } else {
          next_machine();
        }
      }
    }
    if (!r.emitted && phase_ == Phase::kAskX) {
      r.emitted = "0." + numeral(i_) + "." + numeral(i_);
      phase_ = Phase::kAskY;
    } else if (!r.emitted && phase_ == Phase::kAskY) {
      r.emitted = "0." + numeral(i_) + ".0";
      phase_ = Phase::kAwait;
    }
    r.busy = phase_ == Phase::kAskX || phase_ == Phase::kAskY ||
             phase_ == Phase::kSimulate;
    return r;
  }
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<Kolmogorov>(*this);
  }

 private:
  enum class Phase { kIdle, kAskX, kAskY, kAwait, kSimulate, kStuck, kDone };

  void next_machine() {
    ++i_;
    phase_ = Phase::kAskX;
  }

  std::shared_ptr<const Catalog> catalog_;
  Phase phase_ = Phase::kIdle;
  std::uint64_t target_ = 0;
  std::uint64_t i_ = 0;
  std::optional<ToyRunner> runner_;
};

class ReSwitch final : public Strategy {
 public:
  explicit ReSwitch(Semidecider s) : semidecider_(std::move(s)) {}

  StepResult step(RunView newly_observed) override {
    for (const auto& m : newly_observed) {
      if (!x_ && m.player == Player::kBot) {
        x_ = parse_numeral(m.move);
        if (!x_) done_ = true;
      }
    }
    StepResult r;
    if (!x_ || done_) return r;
    budget_ += kSimulationSlice;
    if (semidecider_(*x_, budget_)) {
      r.emitted = "s";
      done_ = true;
    }
    r.busy = !done_;
    return r;
  }
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<ReSwitch>(*this);
  }

 private:
  Semidecider semidecider_;
  std::optional<std::uint64_t> x_;
  std::uint64_t budget_ = 0;
  bool done_ = false;
};

class FunctionStrategy final : public Strategy {
 public:
  explicit FunctionStrategy(std::function<std::uint64_t(std::uint64_t)> f)
      : f_(std::move(f)) {}

  StepResult step(RunView newly_observed) override {
    StepResult r;
    for (const auto& m : newly_observed) {
      if (answered_ || m.player != Player::kBot) continue;
      answered_ = true;
      if (auto k = parse_numeral(m.move)) r.emitted = numeral(f_(*k));
    }
    return r;
  }
  std::unique_ptr<Strategy> clone() const override {
    return std::make_unique<FunctionStrategy>(*this);
  }

 private:
  std::function<std::uint64_t(std::uint64_t)> f_;
  bool answered_ = false;
};

}  // namespace

std::unique_ptr<Strategy> copycat(const Expr& e) {
  const auto& c = e.children;
  bool ok = (e.kind == ExprKind::kPor &&
             (is_negation_of(c[1], c[0]) || is_negation_of(c[0], c[1]))) ||
            (e.kind == ExprKind::kPimpl && structurally_equal(*c[0], *c[1]));
  if (!ok) mismatch("copycat", "e \\/ ~e or e -> e", e);
  return std::make_unique<Copycat>();
}

std::unique_ptr<Strategy> halting_to_acceptance(const Expr& e,
                                                std::shared_ptr<const Catalog> c) {
  if (e.kind != ExprKind::kPimpl || !decision_problem(*e.children[0]) ||
      !decision_problem(*e.children[1])) {
    mismatch("halt2accept", "(all x. all y. H | ~H) -> (all x. all y. A | ~A)", e);
  }
  return std::make_unique<HaltToAccept>(std::move(c));
}

std::unique_ptr<Strategy> kolmogorov_via_halting(const Expr& e,
                                                 std::shared_ptr<const Catalog> c) {
  if (e.kind != ExprKind::kPrimpl || !decision_problem(*e.children[0]) ||
      e.children[1]->kind != ExprKind::kChall ||
      e.children[1]->children[0]->kind != ExprKind::kChexists) {
    mismatch("kolmogorov", "(all x. all y. H | ~H) >- all t. exi z. K", e);
  }
  return std::make_unique<Kolmogorov>(std::move(c));
}

std::unique_ptr<Strategy> re_switch(const Expr& e, Semidecider semidecider) {
  if (e.kind != ExprKind::kChall || e.children[0]->kind != ExprKind::kSor ||
      !is_negation_of(e.children[0]->children[0], e.children[0]->children[1])) {
    mismatch("re-switch", "all x. ~A sor A", e);
  }
  return std::make_unique<ReSwitch>(std::move(semidecider));
}

Semidecider halts_on_zero(std::shared_ptr<const Catalog> c) {
  return [c](std::uint64_t x, std::uint64_t budget) {
    if (x >= c->size()) return false;
    ToyRunner runner(c->at(x), 0);
    return runner.run(budget).has_value();
  };
}

std::unique_ptr<Strategy> function_strategy(const Expr& e,
                                            std::function<std::uint64_t(std::uint64_t)> f) {
  if (e.kind != ExprKind::kChall || e.children[0]->kind != ExprKind::kChexists) {
    mismatch("function", "all x. exi y. ...", e);
  }
  return std::make_unique<FunctionStrategy>(std::move(f));
}

}  // namespace col
