#include "col/registry.hpp"

#include "col/errors.hpp"
#include "col/fsm.hpp"
#include "col/strategies.hpp"

namespace col {

std::shared_ptr<const Catalog> catalog_of(const Interpretation& interp) {
  if (interp.catalog) return interp.catalog;
  return std::shared_ptr<const Catalog>(std::shared_ptr<const Catalog>(), &default_catalog());
}

std::unique_ptr<Strategy> make_strategy(const std::string& name, const Expr& e,
                                        const Interpretation& interp) {
  if (name == "copycat") return copycat(e);
  if (name == "choose-left") return std::make_unique<FixedStrategy>(std::vector<Move>{"0"});
  if (name == "choose-right") return std::make_unique<FixedStrategy>(std::vector<Move>{"1"});
  if (name == "silent") return std::make_unique<SilentStrategy>();
  if (name == "function:id") {
    return function_strategy(e, [](std::uint64_t k) { return k; });
  }
  if (name == "function:succ") {
    return function_strategy(e, [](std::uint64_t k) { return k + 1; });
  }
  if (name == "halt2accept") return halting_to_acceptance(e, catalog_of(interp));
  if (name == "kolmogorov") return kolmogorov_via_halting(e, catalog_of(interp));
  if (name == "re-switch") return re_switch(e, halts_on_zero(catalog_of(interp)));
  if (name.starts_with("fsm:")) return fsm_strategy(load_fsm(name.substr(4)));
  throw UnknownName("unknown machine: " + name);
}

EnvChoice make_env(const std::string& name, std::size_t bound, std::size_t opportunities) {
  if (name == "silent") return {std::make_unique<SilentEnv>(), std::nullopt};
  if (name.starts_with("script:")) {
    return {std::make_unique<ScriptedEnv>(load_script(name.substr(7))), std::nullopt};
  }
  if (name.starts_with("random:")) {
    auto seed = parse_numeral(std::string_view(name).substr(7));
    if (!seed) throw UnknownName("random environment needs a numeral seed: " + name);
    return {std::make_unique<RandomEnv>(bound, 0.5, opportunities), *seed};
  }
  throw UnknownName("unknown environment: " + name);
}

}  // namespace col
