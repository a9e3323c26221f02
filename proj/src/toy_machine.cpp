#include "col/toy_machine.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "col/errors.hpp"
#include "col/game.hpp"

namespace col {

std::vector<Instruction> assemble(const std::vector<std::string>& source) {
  std::map<std::string, std::size_t> labels;
  std::vector<std::string> bodies;
  for (std::size_t i = 0; i < source.size(); ++i) {
    std::string line = source[i];
    auto colon = line.find(':');
    if (colon != std::string::npos) {
      std::string label = line.substr(0, colon);
      if (label.empty() || labels.count(label)) {
        throw FormatError("bad or duplicate label in: " + line);
      }
      labels[label] = i;
      line = line.substr(colon + 1);
    }
    bodies.push_back(line);
  }
  auto reg = [](const std::string& r, const std::string& line) {
    if (r != "0" && r != "1") throw FormatError("register must be 0 or 1: " + line);
    return r == "0" ? 0 : 1;
  };
  std::vector<Instruction> program;
  for (const auto& line : bodies) {
    std::istringstream in(line);
    std::string op, a, b, extra;
    in >> op >> a >> b >> extra;
    if (!extra.empty()) throw FormatError("trailing tokens: " + line);
    Instruction ins{};
    if (op == "INC" || op == "DEC") {
      if (a.empty() || !b.empty()) throw FormatError("expected one register: " + line);
      ins.op = op == "INC" ? OpCode::kInc : OpCode::kDec;
      ins.reg = reg(a, line);
    } else if (op == "JZ") {
      auto it = labels.find(b);
      if (it == labels.end()) throw FormatError("unknown label: " + line);
      ins.op = OpCode::kJz;
      ins.reg = reg(a, line);
      ins.target = it->second;
    } else if ((op == "ACCEPT" || op == "REJECT") && a.empty()) {
      ins.op = op == "ACCEPT" ? OpCode::kAccept : OpCode::kReject;
    } else if (op == "OUTPUT" && b.empty()) {
      auto v = parse_numeral(a);
      if (!v) throw FormatError("OUTPUT needs a numeral: " + line);
      ins.op = OpCode::kOutput;
      ins.value = *v;
    } else {
      throw FormatError("unknown instruction: " + line);
    }
    program.push_back(ins);
  }
  return program;
}

ToyRunner::ToyRunner(const ToyMachine& m, std::uint64_t input)
    : machine_(&m), counters_{input, 0} {}

ToyResult ToyRunner::run(std::uint64_t steps) {
  const auto& program = machine_->program;
  for (std::uint64_t i = 0; i < steps && !result_; ++i) {
    if (pc_ >= program.size()) {
      result_ = Halted{false, output_};
      break;
    }
    const Instruction& ins = program[pc_];
    ++executed_;
    switch (ins.op) {
      case OpCode::kInc:
        ++counters_[ins.reg];
        ++pc_;
        break;
      case OpCode::kDec:
        if (counters_[ins.reg] > 0) --counters_[ins.reg];
        ++pc_;
        break;
      case OpCode::kJz:
        pc_ = counters_[ins.reg] == 0 ? ins.target : pc_ + 1;
        break;
      case OpCode::kAccept:
        result_ = Halted{true, output_};
        break;
      case OpCode::kReject:
        result_ = Halted{false, output_};
        break;
      case OpCode::kOutput:
        output_ = ins.value;
        ++pc_;
        break;
    }
  }
  // Falling off the end costs no instruction.
  if (!result_ && pc_ >= program.size()) result_ = Halted{false, output_};
  return result_;
}

Catalog::Catalog(std::vector<ToyMachine> machines) : machines_(std::move(machines)) {
  for (std::size_t i = 0; i < machines_.size(); ++i) {
    if (machines_[i].id != i) throw FormatError("catalog ids must be dense from 0");
  }
}

const ToyMachine& Catalog::at(std::uint64_t id) const {
  if (id >= machines_.size()) {
    throw BadId("no toy machine with id " + std::to_string(id));
  }
  return machines_[id];
}

namespace {

ToyResult ground_truth_run(const ToyMachine& m, std::uint64_t input) {
  ToyRunner runner(m, input);
  return runner.run(Catalog::kGroundTruthBudget);
}

}  // namespace

bool Catalog::halts(std::uint64_t id, std::uint64_t input) const {
  if (id >= machines_.size()) return false;
  const auto& m = machines_[id];
  if (input < m.halts_table.size()) return m.halts_table[input];
  return ground_truth_run(m, input).has_value();
}

bool Catalog::accepts(std::uint64_t id, std::uint64_t input) const {
  if (id >= machines_.size()) return false;
  const auto& m = machines_[id];
  if (input < m.accepts_table.size()) return m.accepts_table[input];
  auto r = ground_truth_run(m, input);
  return r && r->accept;
}

std::optional<std::uint64_t> Catalog::minimal_producer(std::uint64_t value) const {
  for (const auto& m : machines_) {
    if (m.output_on_0 == value) return m.id;
  }
  return std::nullopt;
}

ToyResult toy_run(const Catalog& c, std::uint64_t id, std::uint64_t input,
                  std::uint64_t steps) {
  ToyRunner runner(c.at(id), input);
  return runner.run(steps);
}

Catalog catalog_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw FormatError("catalog must be a JSON list");
  std::vector<ToyMachine> machines;
  try {
    for (const auto& entry : doc) {
      ToyMachine m;
      m.id = entry.at("id").get<std::uint64_t>();
      m.source = entry.at("program").get<std::vector<std::string>>();
      m.program = assemble(m.source);
      m.halts_table = entry.at("halts_table").get<std::vector<bool>>();
      m.accepts_table = entry.at("accepts_table").get<std::vector<bool>>();
      const auto& out = entry.at("output_on_0");
      if (!out.is_null()) m.output_on_0 = out.get<std::uint64_t>();
      machines.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed catalog: ") + e.what());
  }
  return Catalog(std::move(machines));
}

nlohmann::json catalog_to_json(const Catalog& c) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : c.machines()) {
    out.push_back({{"id", m.id},
                   {"program", m.source},
                   {"halts_table", m.halts_table},
                   {"accepts_table", m.accepts_table},
                   {"output_on_0", m.output_on_0 ? nlohmann::json(*m.output_on_0)
                                                 : nlohmann::json(nullptr)}});
  }
  return out;
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open catalog file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("catalog is not valid JSON: " + std::string(e.what()));
  }
  return catalog_from_json(doc);
}

namespace {

constexpr std::size_t kTableSize = 16;

ToyMachine shipped(std::uint64_t id, std::vector<std::string> source,
                   bool (*halts)(std::uint64_t), bool (*accepts)(std::uint64_t),
                   std::optional<std::uint64_t> output_on_0) {
  ToyMachine m;
  m.id = id;
  m.program = assemble(source);
  m.source = std::move(source);
  for (std::uint64_t n = 0; n < kTableSize; ++n) {
    m.halts_table.push_back(halts(n));
    m.accepts_table.push_back(accepts(n));
  }
  m.output_on_0 = output_on_0;
  return m;
}

bool always(std::uint64_t) { return true; }
bool never(std::uint64_t) { return false; }
bool even(std::uint64_t n) { return n % 2 == 0; }
bool zero(std::uint64_t n) { return n == 0; }
bool positive(std::uint64_t n) { return n > 0; }

}  // namespace

const Catalog& default_catalog() {
  static const Catalog catalog({
      shipped(0, {"ACCEPT"}, always, always, std::nullopt),
      shipped(1, {"l: JZ 1 l"}, never, never, std::nullopt),
      shipped(2, {"OUTPUT 3", "ACCEPT"}, always, always, 3),
      shipped(3, {"REJECT"}, always, never, std::nullopt),
      shipped(4, {"OUTPUT 0", "REJECT"}, always, never, 0),
      shipped(5,
              {"top: JZ 0 even", "DEC 0", "JZ 0 odd", "DEC 0", "JZ 1 top",
               "even: OUTPUT 1", "ACCEPT", "odd: JZ 1 odd"},
              even, even, 1),
      shipped(6, {"l: JZ 0 done", "DEC 0", "JZ 1 l", "done: OUTPUT 2", "ACCEPT"},
              always, always, 2),
      shipped(7, {"JZ 0 yes", "REJECT", "yes: OUTPUT 4", "ACCEPT"}, always, zero, 4),
      shipped(8, {"l: JZ 0 l", "OUTPUT 3", "ACCEPT"}, positive, positive, std::nullopt),
      shipped(9, {"INC 1", "INC 1", "OUTPUT 3", "ACCEPT"}, always, always, 3),
  });
  return catalog;
}

}  // namespace col
