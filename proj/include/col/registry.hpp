#pragma once

// Machines and environments by name, as used by the CLI and the service.
//
//   machines:      copycat, choose-left, choose-right, function:id,
//                  function:succ, halt2accept, kolmogorov, re-switch,
//                  fsm:<file>, silent
//   environments:  silent, script:<file>, random:<seed>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "col/expr.hpp"
#include "col/interpretation.hpp"
#include "col/machine.hpp"

namespace col {

// Throws UnknownName, ShapeMismatch, MalformedSpec.
std::unique_ptr<Strategy> make_strategy(const std::string& name, const Expr& e,
                                        const Interpretation& interp);

struct EnvChoice {
  std::unique_ptr<EnvScript> env;
  std::optional<std::uint64_t> seed;  // random:<seed> fixes the seed
};

// A random environment plays below `bound` in its first `opportunities` cycles.
EnvChoice make_env(const std::string& name, std::size_t bound, std::size_t opportunities);

std::shared_ptr<const Catalog> catalog_of(const Interpretation& interp);

}  // namespace col
