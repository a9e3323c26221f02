#pragma once

// The named winning strategies. Each one checks the shape of the formula it
// is meant to play and throws ShapeMismatch otherwise; none of them consults
// the game object, they work on move strings alone.

#include <cstdint>
#include <functional>
#include <memory>

#include "col/expr.hpp"
#include "col/machine.hpp"
#include "col/toy_machine.hpp"

namespace col {

// Toy-machine instructions a simulating strategy executes per scheduler step.
inline constexpr std::uint64_t kSimulationSlice = 256;

// e \/ ~e, ~e \/ e or e -> e: replays every adversary move "0.α" as "1.α"
// and vice versa.
std::unique_ptr<Strategy> copycat(const Expr& e);

// (all x. all y. Halts(x,y) | ~Halts(x,y)) -> (all x. all y. Accepts(x,y) | ~Accepts(x,y))
std::unique_ptr<Strategy> halting_to_acceptance(const Expr& e,
                                                std::shared_ptr<const Catalog> c);

// (all x. all y. Halts(x,y) | ~Halts(x,y)) >- all t. exi z. K(z,t)
std::unique_ptr<Strategy> kolmogorov_via_halting(const Expr& e,
                                                 std::shared_ptr<const Catalog> c);

// Whether a witness for x shows up within `budget` units of work.
using Semidecider = std::function<bool(std::uint64_t x, std::uint64_t budget)>;

// all x. ~A(x) sor A(x): switches once the semidecider confirms A(m).
std::unique_ptr<Strategy> re_switch(const Expr& e, Semidecider semidecider);

// The semidecider for "catalog machine x halts on input 0".
Semidecider halts_on_zero(std::shared_ptr<const Catalog> c);

// all x. exi y. ...: answers the environment's k with f(k).
std::unique_ptr<Strategy> function_strategy(const Expr& e,
                                            std::function<std::uint64_t(std::uint64_t)> f);

}  // namespace col
