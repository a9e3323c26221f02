#include "col/fsm.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "col/errors.hpp"
#include "col/run_format.hpp"

namespace col {

namespace {

std::vector<std::string_view> segments(std::string_view m) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto dot = m.find('.', start);
    if (dot == std::string_view::npos) {
      out.push_back(m.substr(start));
      return out;
    }
    out.push_back(m.substr(start, dot - start));
    start = dot + 1;
  }
}

// The first `k` numeral segments of `m` that are followed by a dot, dots kept.
std::string address_prefix(std::string_view m, std::size_t k) {
  std::string out;
  for (std::size_t i = 0; i < k; ++i) {
    auto a = split_address(m);
    if (!a) break;
    out += numeral(a->index) + ".";
    m = a->rest;
  }
  return out;
}

}  // namespace

bool pattern_matches(const LabeledMove& pattern, const LabeledMove& m) {
  if (pattern.player != m.player) return false;
  auto want = segments(pattern.move);
  auto got = segments(m.move);
  if (want.size() != got.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i] == "*") {
      // a wildcard only stands for an address, never for the final segment
      if (i + 1 == want.size() || !parse_numeral(got[i])) return false;
    } else if (want[i] != got[i]) {
      return false;
    }
  }
  return true;
}

void validate(const FsmSpec& spec) {
  std::size_t n = spec.states.size();
  if (n == 0) throw MalformedSpec("FSM has no states");
  if (spec.start >= n) throw MalformedSpec("FSM start state out of range");
  if (spec.transition.size() != n || spec.sink.size() != n || spec.emission.size() != n) {
    throw MalformedSpec("FSM tables must have one row per state");
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (spec.transition[s].size() != spec.alphabet.size()) {
      throw MalformedSpec("FSM transition row for " + spec.states[s] +
                          " is not total over the alphabet");
    }
    for (std::size_t t : spec.transition[s]) {
      if (t >= n) throw MalformedSpec("FSM transition to unknown state");
    }
    if (spec.sink[s] >= n) throw MalformedSpec("FSM sink to unknown state");
    if (spec.emission[s] && !valid_move(spec.emission[s]->move) &&
        !spec.emission[s]->move.empty()) {
      throw MalformedSpec("FSM emission is not a move: " + spec.emission[s]->move);
    }
  }
}

FsmStrategy::FsmStrategy(std::shared_ptr<const FsmSpec> spec)
    : spec_(std::move(spec)), state_(spec_->start) {}

StepResult FsmStrategy::step(RunView newly_observed) {
  const FsmSpec& s = *spec_;
  bool changed = !started_;
  started_ = true;
  for (const auto& m : newly_observed) {
    std::size_t next = s.sink[state_];
    for (std::size_t letter = 0; letter < s.alphabet.size(); ++letter) {
      if (pattern_matches(s.alphabet[letter], m)) {
        next = s.transition[state_][letter];
        break;
      }
    }
    if (next != state_) {
      changed = true;
      trigger_ = m.move;
      state_ = next;
    }
  }
  StepResult r;
  if (changed && s.emission[state_]) {
    const FsmEmission& e = *s.emission[state_];
    r.emitted = address_prefix(trigger_, e.copy) + e.move;
  }
  return r;
}

std::unique_ptr<Strategy> FsmStrategy::clone() const {
  return std::make_unique<FsmStrategy>(*this);
}

std::unique_ptr<Strategy> fsm_strategy(FsmSpec spec) {
  validate(spec);
  return std::make_unique<FsmStrategy>(std::make_shared<const FsmSpec>(std::move(spec)));
}

FsmSpec fsm_from_json(const nlohmann::json& doc) {
  FsmSpec spec;
  try {
    std::map<std::string, std::size_t> index;
    spec.states = doc.at("states").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
      if (!index.emplace(spec.states[i], i).second) {
        throw MalformedSpec("duplicate FSM state " + spec.states[i]);
      }
    }
    auto state = [&](const nlohmann::json& j) {
      auto it = index.find(j.get<std::string>());
      if (it == index.end()) throw MalformedSpec("unknown FSM state " + j.dump());
      return it->second;
    };
    spec.start = state(doc.at("start"));
    std::vector<std::string> letters = doc.at("alphabet").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < letters.size(); ++i) {
      const auto& l = letters[i];
      if (std::find(letters.begin(), letters.begin() + i, l) != letters.begin() + i) {
        throw MalformedSpec("duplicate FSM alphabet entry " + l);
      }
      try {
        spec.alphabet.push_back(parse_labeled(l));
      } catch (const FormatError& e) {
        throw MalformedSpec(std::string("bad FSM alphabet entry: ") + e.what());
      }
    }
    const auto& transitions = doc.at("transitions");
    for (const auto& name : spec.states) {
      if (!transitions.contains(name)) {
        throw MalformedSpec("no transitions for FSM state " + name);
      }
      const auto& row = transitions.at(name);
      for (const auto& [key, _] : row.items()) {
        if (std::find(letters.begin(), letters.end(), key) == letters.end()) {
          throw MalformedSpec("transition of " + name + " on " + key + " is not in the alphabet");
        }
      }
      std::vector<std::size_t> out;
      for (const auto& l : letters) {
        if (!row.contains(l)) {
          throw MalformedSpec("transition of " + name + " on " + l + " is missing");
        }
        out.push_back(state(row.at(l)));
      }
      spec.transition.push_back(std::move(out));
    }
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
      const auto& sink = doc.contains("sink") ? doc.at("sink") : nlohmann::json::object();
      spec.sink.push_back(sink.contains(spec.states[i]) ? state(sink.at(spec.states[i])) : i);
      const auto& em = doc.contains("emissions") ? doc.at("emissions")
                                                 : nlohmann::json::object();
      std::optional<FsmEmission> e;
      if (em.contains(spec.states[i])) {
        const auto& v = em.at(spec.states[i]);
        if (v.is_string()) {
          e = FsmEmission{0, parse_move(v.get<std::string>())};
        } else if (v.is_object()) {
          e = FsmEmission{v.value("copy", std::size_t{0}),
                          parse_move(v.at("move").get<std::string>())};
        } else if (!v.is_null()) {
          throw MalformedSpec("bad FSM emission for " + spec.states[i]);
        }
      }
      spec.emission.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec(std::string("malformed FSM spec: ") + e.what());
  } catch (const FormatError& e) {
    throw MalformedSpec(std::string("malformed FSM spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

nlohmann::json fsm_to_json(const FsmSpec& spec) {
  nlohmann::json doc;
  doc["states"] = spec.states;
  doc["start"] = spec.states[spec.start];
  std::vector<std::string> letters;
  for (const auto& l : spec.alphabet) letters.push_back(format_labeled(l));
  doc["alphabet"] = letters;
  for (std::size_t s = 0; s < spec.states.size(); ++s) {
    const auto& name = spec.states[s];
    doc["transitions"][name] = nlohmann::json::object();
    for (std::size_t l = 0; l < letters.size(); ++l) {
      doc["transitions"][name][letters[l]] = spec.states[spec.transition[s][l]];
    }
    doc["sink"][name] = spec.states[spec.sink[s]];
    const auto& e = spec.emission[s];
    if (!e) {
      doc["emissions"][name] = nullptr;
    } else if (e->copy == 0) {
      doc["emissions"][name] = format_move(e->move);
    } else {
      doc["emissions"][name] = {{"copy", e->copy}, {"move", format_move(e->move)}};
    }
  }
  return doc;
}

FsmSpec load_fsm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedSpec("cannot open FSM file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec("FSM file is not valid JSON: " + std::string(e.what()));
  }
  return fsm_from_json(doc);
}

FsmSpec bit_server_fsm() {
  enum { kS0, kS1, kA0, kA1 };
  FsmSpec spec;
  spec.states = {"S0", "S1", "A0", "A1"};
  spec.start = kS0;
  for (const char* l : {"B:0", "B:1", "B:_", "B:*.0", "B:*.1", "B:*._"}) {
    spec.alphabet.push_back(parse_labeled(l));
  }
  // writes overwrite; a read answers with whatever was written last
  std::vector<std::size_t> from0 = {kS0, kS1, kA0, kS0, kS1, kA0};
  std::vector<std::size_t> from1 = {kS0, kS1, kA1, kS0, kS1, kA1};
  spec.transition = {from0, from1, from0, from1};
  spec.sink = {kS0, kS1, kA0, kA1};
  spec.emission = {std::nullopt, std::nullopt, FsmEmission{1, "0"}, FsmEmission{1, "1"}};
  return spec;
}

std::vector<FsmSpec> enumerate_reactive_fsms(const std::vector<LabeledMove>& alphabet,
                                             const std::vector<Move>& outputs,
                                             std::size_t max_states) {
  std::vector<FsmSpec> out;
  std::vector<std::size_t> row(alphabet.size(), 0);
  // restricted growth strings: row[i] <= 1 + max(row[0..i)), state 0 is start
  auto emit_all = [&](std::size_t states) {
    std::vector<std::size_t> pick(states, 0);  // 0 = silent, k = outputs[k-1]
    for (;;) {
      FsmSpec spec;
      for (std::size_t s = 0; s < states; ++s) spec.states.push_back("Q" + std::to_string(s));
      spec.alphabet = alphabet;
      for (std::size_t s = 0; s < states; ++s) {
        spec.transition.push_back(s == 0 ? row : std::vector<std::size_t>(alphabet.size(), s));
        spec.sink.push_back(s);
        spec.emission.push_back(pick[s] == 0 ? std::nullopt
                                             : std::optional<FsmEmission>(
                                                   FsmEmission{0, outputs[pick[s] - 1]}));
      }
      out.push_back(std::move(spec));
      std::size_t i = 0;
      while (i < states && ++pick[i] > outputs.size()) pick[i++] = 0;
      if (i == states) return;
    }
  };
  for (;;) {
    std::size_t used = 1;
    for (std::size_t r : row) used = std::max(used, r + 1);
    if (used <= max_states) emit_all(used);
    // next restricted growth string
    std::size_t i = alphabet.size();
    while (i > 0) {
      --i;
      std::size_t limit = 1;
      for (std::size_t j = 0; j < i; ++j) limit = std::max(limit, row[j] + 1);
      // state 0 counts as used even before any letter maps to it
      if (row[i] < limit && row[i] + 1 < max_states) {
        ++row[i];
        std::fill(row.begin() + i + 1, row.end(), 0);
        break;
      }
      if (i == 0) return out;
    }
    if (alphabet.empty()) return out;
  }
}

}  // namespace col
