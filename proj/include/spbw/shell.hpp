#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spbw/extension.hpp"

namespace spbw {

// a parsed, name-resolved presentation file
struct Workspace {
  struct RingDecl {
    std::string name;
    RingPtr ring;
  };
  struct MapDecl {
    std::string name;
    std::string ring;
    bool is_deriv = false;
    std::string sigma;  // derivations only
  };
  struct VarRule {
    std::string var, sigma, delta;  // empty delta means the zero derivation
  };

  std::vector<RingDecl> ring_decls;
  std::vector<MapDecl> map_decls;
  std::map<std::string, RingMap> endos;
  std::map<std::string, Derivation> derivs;
  std::vector<std::string> presets_used;

  std::string ext_name, ext_ring;
  std::vector<VarRule> var_rules;
  std::shared_ptr<ExtensionSpec> ext;  // at most one per file

  RingPtr find_ring(const std::string& name) const;
  const RingMap& find_endo(const std::string& name) const;
  const Derivation& find_deriv(const std::string& name) const;
};

Workspace parse_presentation(const std::string& text);

// grammar-conforming text whose reparse yields the same workspace; idempotent
std::string canonical_print(const Workspace& ws);

// literal evaluators for CLI arguments
Elem parse_elem(const RingPtr& ring, const std::string& text);
SkewPoly parse_poly(const Workspace& ws, const std::string& text);

const std::vector<std::pair<std::string, std::string>>& preset_catalog();
const std::string& preset_text(const std::string& name);
Workspace load_preset(const std::string& name);

}  // namespace spbw
