#include "col/combinators.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "col/run_format.hpp"

namespace col {
namespace {

constexpr std::string_view kSwitch = "s";
constexpr std::string_view kPush = "+";
constexpr std::string_view kPop = "-";

std::string prefixed(std::uint64_t index, std::string_view rest) {
  return numeral(index) + "." + std::string(rest);
}

void append_prefixed(std::vector<Move>& out, std::uint64_t index,
                     const std::vector<Move>& inner) {
  for (const auto& m : inner) out.push_back(prefixed(index, m));
}

class Elementary final : public Game {
 public:
  explicit Elementary(bool truth) : truth_(truth) {}

  bool legal_extension(RunView, const LabeledMove&) const override { return false; }
  Player winner_of_legal(RunView) const override {
    return truth_ ? Player::kTop : Player::kBot;
  }
  std::vector<Move> enumerate_moves(RunView, Player, std::size_t) const override {
    return {};
  }

 private:
  bool truth_;
};

class Negation final : public Game {
 public:
  explicit Negation(GamePtr g) : g_(std::move(g)) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    return g_->legal_extension(flip_labels(position), {opponent(m.player), m.move});
  }
  Player winner_of_legal(RunView run) const override {
    return opponent(g_->winner_of_legal(flip_labels(run)));
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    return g_->enumerate_moves(flip_labels(position), opponent(p), bound);
  }

 private:
  GamePtr g_;
};

class Choice final : public Game {
 public:
  Choice(ChoiceKind kind, GamePtr g, GamePtr h)
      : chooser_(kind == ChoiceKind::kChand ? Player::kBot : Player::kTop),
        components_{std::move(g), std::move(h)} {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    if (position.empty()) {
      return m.player == chooser_ && (m.move == "0" || m.move == "1");
    }
    return chosen(position).legal_extension(position.subspan(1), m);
  }
  Player winner_of_legal(RunView run) const override {
    if (run.empty()) return opponent(chooser_);
    return chosen(run).winner_of_legal(run.subspan(1));
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    if (position.empty()) {
      std::vector<Move> out;
      if (p != chooser_) return out;
      for (std::size_t i = 0; i < std::min<std::size_t>(bound, 2); ++i) {
        out.push_back(numeral(i));
      }
      return out;
    }
    return chosen(position).enumerate_moves(position.subspan(1), p, bound);
  }

 private:
  const Game& chosen(RunView run) const {
    return *components_[run.front().move == "0" ? 0 : 1];
  }

  Player chooser_;
  GamePtr components_[2];
};

class ChoiceQuant final : public Game {
 public:
  ChoiceQuant(QuantKind kind, QuantBody body)
      : chooser_(kind == QuantKind::kChall ? Player::kBot : Player::kTop),
        body_(std::move(body)) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    if (position.empty()) {
      return m.player == chooser_ && parse_numeral(m.move).has_value();
    }
    return instance(position)->legal_extension(position.subspan(1), m);
  }
  Player winner_of_legal(RunView run) const override {
    if (run.empty()) return opponent(chooser_);
    return instance(run)->winner_of_legal(run.subspan(1));
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    if (position.empty()) {
      std::vector<Move> out;
      if (p != chooser_) return out;
      for (std::size_t i = 0; i < bound; ++i) out.push_back(numeral(i));
      return out;
    }
    return instance(position)->enumerate_moves(position.subspan(1), p, bound);
  }

 private:
  GamePtr instance(RunView run) const {
    std::uint64_t value = *parse_numeral(run.front().move);
    std::lock_guard lock(mutex_);
    auto it = cache_.find(value);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 4096) cache_.clear();
    GamePtr g = body_(value);
    cache_.emplace(value, g);
    return g;
  }

  Player chooser_;
  QuantBody body_;
  mutable std::mutex mutex_;
  mutable std::map<std::uint64_t, GamePtr> cache_;
};

class Parallel final : public Game {
 public:
  Parallel(ParallelKind kind, GamePtr g, GamePtr h)
      : kind_(kind), components_{std::move(g), std::move(h)} {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    auto address = split_address(m.move);
    if (!address || address->index > 1) return false;
    std::string prefix = numeral(address->index) + ".";
    return components_[address->index]->legal_extension(
        subrun(position, prefix), {m.player, std::string(address->rest)});
  }
  Player winner_of_legal(RunView run) const override {
    bool left = components_[0]->winner_of_legal(subrun(run, "0.")) == Player::kTop;
    bool right = components_[1]->winner_of_legal(subrun(run, "1.")) == Player::kTop;
    bool top = kind_ == ParallelKind::kPand ? (left && right) : (left || right);
    return top ? Player::kTop : Player::kBot;
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    std::vector<Move> out;
    for (std::uint64_t i = 0; i < 2; ++i) {
      std::string prefix = numeral(i) + ".";
      append_prefixed(out, i,
                      components_[i]->enumerate_moves(subrun(position, prefix), p, bound));
    }
    return out;
  }

 private:
  ParallelKind kind_;
  GamePtr components_[2];
};

class Precurrence final : public Game {
 public:
  Precurrence(GamePtr g, std::optional<std::size_t> copies)
      : g_(std::move(g)), copies_(copies) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    auto address = split_address(m.move);
    if (!address) return false;
    if (copies_ && address->index >= *copies_) return false;
    return g_->legal_extension(subrun(position, prefixed(address->index, "")),
                               {m.player, std::string(address->rest)});
  }
  Player winner_of_legal(RunView run) const override {
    std::map<std::uint64_t, Run> touched;
    for (const auto& m : run) {
      auto address = split_address(m.move);
      touched[address->index].push_back({m.player, std::string(address->rest)});
    }
    for (const auto& [index, copy] : touched) {
      if (g_->winner_of_legal(copy) != Player::kTop) return Player::kBot;
    }
    bool untouched_remain = !copies_ || touched.size() < *copies_;
    if (untouched_remain && g_->winner_of_legal(Run{}) != Player::kTop) {
      return Player::kBot;
    }
    return Player::kTop;
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    std::vector<Move> out;
    std::size_t limit = copies_ ? std::min(bound, *copies_) : bound;
    for (std::uint64_t i = 0; i < limit; ++i) {
      append_prefixed(out, i,
                      g_->enumerate_moves(subrun(position, prefixed(i, "")), p, bound));
    }
    return out;
  }

 private:
  GamePtr g_;
  std::optional<std::size_t> copies_;
};

class Sequential final : public Game {
 public:
  Sequential(SequentialKind kind, GamePtr g, GamePtr h)
      : switcher_(kind == SequentialKind::kSand ? Player::kBot : Player::kTop),
        components_{std::move(g), std::move(h)} {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    bool switched = has_switched(position);
    if (m.move == kSwitch) return m.player == switcher_ && !switched;
    auto address = split_address(m.move);
    if (!address || address->index > 1) return false;
    std::size_t active = switched ? 1 : 0;
    if (address->index > active) return false;
    if (m.player == switcher_ && address->index != active) return false;
    return components_[address->index]->legal_extension(
        subrun(position, prefixed(address->index, "")),
        {m.player, std::string(address->rest)});
  }
  Player winner_of_legal(RunView run) const override {
    std::size_t active = has_switched(run) ? 1 : 0;
    return components_[active]->winner_of_legal(subrun(run, prefixed(active, "")));
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    std::vector<Move> out;
    std::size_t active = has_switched(position) ? 1 : 0;
    if (p == switcher_ && active == 0) out.emplace_back(kSwitch);
    for (std::uint64_t i = 0; i <= active && i < bound; ++i) {
      if (p == switcher_ && i != active) continue;
      append_prefixed(out, i,
                      components_[i]->enumerate_moves(subrun(position, prefixed(i, "")),
                                                      p, bound));
    }
    return out;
  }

 private:
  bool has_switched(RunView run) const {
    return std::any_of(run.begin(), run.end(), [&](const LabeledMove& m) {
      return m.player == switcher_ && m.move == kSwitch;
    });
  }

  Player switcher_;
  GamePtr components_[2];
};

class Srecurrence final : public Game {
 public:
  explicit Srecurrence(GamePtr g) : g_(std::move(g)) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    if (m.player == Player::kBot && m.move == kSwitch) return true;
    auto address = split_address(m.move);
    if (!address) return false;
    std::uint64_t active = switches(position);
    if (address->index > active) return false;
    if (m.player == Player::kBot && address->index != active) return false;
    return g_->legal_extension(subrun(position, prefixed(address->index, "")),
                               {m.player, std::string(address->rest)});
  }
  Player winner_of_legal(RunView run) const override {
    return g_->winner_of_legal(subrun(run, prefixed(switches(run), "")));
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    std::vector<Move> out;
    std::uint64_t active = switches(position);
    if (p == Player::kBot) out.emplace_back(kSwitch);
    for (std::uint64_t i = 0; i <= active && i < bound; ++i) {
      if (p == Player::kBot && i != active) continue;
      append_prefixed(out, i,
                      g_->enumerate_moves(subrun(position, prefixed(i, "")), p, bound));
    }
    return out;
  }

 private:
  static std::uint64_t switches(RunView run) {
    return static_cast<std::uint64_t>(
        std::count_if(run.begin(), run.end(), [](const LabeledMove& m) {
          return m.player == Player::kBot && m.move == kSwitch;
        }));
  }

  GamePtr g_;
};

class Tau final : public Game {
 public:
  Tau(std::size_t budget, GamePtr g) : budget_(budget), g_(std::move(g)) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    return position.size() < budget_ && g_->legal_extension(position, m);
  }
  Player winner_of_legal(RunView run) const override { return g_->winner_of_legal(run); }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    if (position.size() >= budget_) return {};
    return g_->enumerate_moves(position, p, bound);
  }

 private:
  std::size_t budget_;
  GamePtr g_;
};

class Stack final : public Game {
 public:
  explicit Stack(GamePtr g) : g_(std::move(g)) {}

  bool legal_extension(RunView position, const LabeledMove& m) const override {
    Layout layout = replay(position);
    if (m.player == Player::kBot) {
      if (m.move == kPush) return true;
      if (m.move == kPop) return layout.live.size() > 1;
    }
    auto address = split_address(m.move);
    if (!address || address->index >= layout.created) return false;
    if (m.player == Player::kBot && address->index != layout.live.back()) return false;
    return g_->legal_extension(subrun(position, prefixed(address->index, "")),
                               {m.player, std::string(address->rest)});
  }
  Player winner_of_legal(RunView run) const override {
    for (std::uint64_t index : replay(run).live) {
      if (g_->winner_of_legal(subrun(run, prefixed(index, ""))) != Player::kTop) {
        return Player::kBot;
      }
    }
    return Player::kTop;
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    Layout layout = replay(position);
    std::vector<Move> out;
    if (p == Player::kBot) {
      out.emplace_back(kPush);
      if (layout.live.size() > 1) out.emplace_back(kPop);
    }
    for (std::uint64_t i = 0; i < layout.created && i < bound; ++i) {
      if (p == Player::kBot && i != layout.live.back()) continue;
      append_prefixed(out, i,
                      g_->enumerate_moves(subrun(position, prefixed(i, "")), p, bound));
    }
    return out;
  }

 private:
  struct Layout {
    std::vector<std::uint64_t> live{0};
    std::uint64_t created = 1;
  };

  static Layout replay(RunView run) {
    Layout layout;
    for (const auto& m : run) {
      if (m.player != Player::kBot) continue;
      if (m.move == kPush) {
        layout.live.push_back(layout.created++);
      } else if (m.move == kPop) {
        layout.live.pop_back();
      }
    }
    return layout;
  }

  GamePtr g_;
};

class Bit final : public Game {
 public:
  bool legal_extension(RunView position, const LabeledMove& m) const override {
    switch (position.size()) {
      case 0:
        return m.player == Player::kBot && is_bit(m.move);
      case 1:
        return m.player == Player::kBot && m.move.empty();
      case 2:
        return m.player == Player::kTop && is_bit(m.move);
      default:
        return false;
    }
  }
  Player winner_of_legal(RunView run) const override {
    if (run.size() < 2) return Player::kTop;
    if (run.size() == 2) return Player::kBot;
    return run[2].move == run[0].move ? Player::kTop : Player::kBot;
  }
  std::vector<Move> enumerate_moves(RunView position, Player p,
                                    std::size_t bound) const override {
    std::vector<Move> out;
    if (position.size() == 1) {
      if (p == Player::kBot) out.emplace_back();
      return out;
    }
    bool writer = position.empty() && p == Player::kBot;
    bool reader = position.size() == 2 && p == Player::kTop;
    if (writer || reader) {
      for (std::size_t b = 0; b < std::min<std::size_t>(bound, 2); ++b) {
        out.push_back(numeral(b));
      }
    }
    return out;
  }

 private:
  static bool is_bit(const Move& m) { return m == "0" || m == "1"; }
};

class FirstMoverWins final : public Game {
 public:
  bool legal_extension(RunView, const LabeledMove& m) const override {
    return valid_move(m.move);
  }
  Player winner_of_legal(RunView run) const override {
    return run.empty() ? Player::kTop : run.front().player;
  }
  std::vector<Move> enumerate_moves(RunView, Player, std::size_t bound) const override {
    std::vector<Move> out;
    for (std::size_t i = 0; i < bound; ++i) out.push_back(numeral(i));
    return out;
  }
};

}  // namespace

GamePtr elementary(bool truth) { return std::make_shared<Elementary>(truth); }

GamePtr negation(GamePtr g) { return std::make_shared<Negation>(std::move(g)); }

GamePtr choice(ChoiceKind kind, GamePtr g, GamePtr h) {
  return std::make_shared<Choice>(kind, std::move(g), std::move(h));
}

GamePtr choice_quant(QuantKind kind, QuantBody body) {
  return std::make_shared<ChoiceQuant>(kind, std::move(body));
}

GamePtr parallel(ParallelKind kind, GamePtr g, GamePtr h) {
  return std::make_shared<Parallel>(kind, std::move(g), std::move(h));
}

GamePtr pimpl(GamePtr g, GamePtr h) {
  return parallel(ParallelKind::kPor, negation(std::move(g)), std::move(h));
}

GamePtr precurrence(GamePtr g, std::optional<std::size_t> copies) {
  return std::make_shared<Precurrence>(std::move(g), copies);
}

GamePtr primpl(GamePtr g, GamePtr h) {
  return pimpl(precurrence(std::move(g)), std::move(h));
}

GamePtr sequential(SequentialKind kind, GamePtr g, GamePtr h) {
  return std::make_shared<Sequential>(kind, std::move(g), std::move(h));
}

GamePtr srecurrence(GamePtr g) { return std::make_shared<Srecurrence>(std::move(g)); }

GamePtr tau(std::size_t budget, GamePtr g) {
  return std::make_shared<Tau>(budget, std::move(g));
}

GamePtr stack(GamePtr g) { return std::make_shared<Stack>(std::move(g)); }

GamePtr bit_game() {
  static const GamePtr instance = std::make_shared<Bit>();
  return instance;
}

GamePtr memory_game() { return precurrence(srecurrence(bit_game())); }

GamePtr first_mover_wins() {
  static const GamePtr instance = std::make_shared<FirstMoverWins>();
  return instance;
}

}  // namespace col
