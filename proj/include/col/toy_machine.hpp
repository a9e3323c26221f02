#pragma once

// Two-counter toy machines standing in for Turing machines at desk scale.
//
// Instructions: INC r | DEC r | JZ r <label> | ACCEPT | REJECT | OUTPUT <nat>,
// r in {0, 1}, optionally prefixed by "<label>:". The input is loaded into
// counter 0. DEC on zero is a no-op; running off the end halts rejecting.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace col {

enum class OpCode { kInc, kDec, kJz, kAccept, kReject, kOutput };

struct Instruction {
  OpCode op;
  int reg = 0;
  std::size_t target = 0;    // JZ
  std::uint64_t value = 0;   // OUTPUT
};

struct ToyMachine {
  std::uint64_t id = 0;
  std::vector<std::string> source;
  std::vector<Instruction> program;
  // Ground truth for inputs 0 .. size-1.
  std::vector<bool> halts_table;
  std::vector<bool> accepts_table;
  std::optional<std::uint64_t> output_on_0;
};

struct Halted {
  bool accept = false;
  std::optional<std::uint64_t> output;
};

using ToyResult = std::optional<Halted>;  // nullopt: still running

// Resumable bounded execution.
class ToyRunner {
 public:
  ToyRunner(const ToyMachine& m, std::uint64_t input);

  // Executes at most `steps` instructions; returns the result once halted.
  ToyResult run(std::uint64_t steps);
  std::uint64_t executed() const { return executed_; }

 private:
  const ToyMachine* machine_;
  std::uint64_t counters_[2];
  std::size_t pc_ = 0;
  std::uint64_t executed_ = 0;
  std::optional<std::uint64_t> output_;
  ToyResult result_;
};

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ToyMachine> machines);

  std::size_t size() const { return machines_.size(); }
  const ToyMachine& at(std::uint64_t id) const;  // throws BadId
  const std::vector<ToyMachine>& machines() const { return machines_; }

  // Instruction budget used for ground truth beyond the annotated tables.
  static constexpr std::uint64_t kGroundTruthBudget = 1'000'000;

  // Ground truth; ids outside the catalog neither halt nor accept.
  bool halts(std::uint64_t id, std::uint64_t input) const;
  bool accepts(std::uint64_t id, std::uint64_t input) const;
  // Smallest id whose annotated output on input 0 is `value`.
  std::optional<std::uint64_t> minimal_producer(std::uint64_t value) const;

 private:
  std::vector<ToyMachine> machines_;
};

std::vector<Instruction> assemble(const std::vector<std::string>& source);

// Throws BadId.
ToyResult toy_run(const Catalog& c, std::uint64_t id, std::uint64_t input,
                  std::uint64_t steps);

// The ten machine catalog shipped with the project (data/catalog.json).
const Catalog& default_catalog();

Catalog catalog_from_json(const nlohmann::json& doc);
nlohmann::json catalog_to_json(const Catalog& c);
Catalog load_catalog(const std::string& path);

}  // namespace col
