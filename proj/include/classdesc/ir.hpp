#ifndef CLASSDESC_IR_HPP
#define CLASSDESC_IR_HPP

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "classdesc/ast.hpp"
#include "classdesc/diagnostics.hpp"
#include "classdesc/registry.hpp"

namespace classdesc {

namespace detail {

inline nlohmann::json type_to_json(const TypeExpr& t) {
  nlohmann::json j;
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      j["variant"] = "primitive";
      j["kind"] = primitive_name(t.primitive_kind());
      break;
    case TypeExpr::Variant::Named:
      j["variant"] = "named";
      j["type-name"] = t.name();
      break;
    case TypeExpr::Variant::Array:
      j["variant"] = "array";
      j["element"] = type_to_json(t.element());
      j["extent"] = t.extent();
      break;
    case TypeExpr::Variant::Pointer:
      j["variant"] = "pointer";
      j["pointee"] = t.has_pointee() ? type_to_json(t.pointee())
                                     : nlohmann::json(nullptr);
      switch (t.pointer_kind()) {
        case PointerKind::Generic: j["kind"] = "generic"; break;
        case PointerKind::MemberPointer: j["kind"] = "member-pointer"; break;
        case PointerKind::SingleObject: j["kind"] = "single-object"; break;
      }
      break;
  }
  return j;
}

inline TypeExpr type_from_json(const nlohmann::json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "primitive") {
    auto k = primitive_from_name(j.at("kind").get<std::string>());
    if (!k) throw std::invalid_argument("unknown primitive kind in IR");
    return TypeExpr::primitive(*k);
  }
  if (variant == "named")
    return TypeExpr::named(j.at("type-name").get<std::string>());
  if (variant == "array")
    return TypeExpr::array(type_from_json(j.at("element")),
                           j.at("extent").get<std::size_t>());
  if (variant == "pointer") {
    const std::string kind = j.at("kind").get<std::string>();
    PointerKind pk = kind == "member-pointer"  ? PointerKind::MemberPointer
                     : kind == "single-object" ? PointerKind::SingleObject
                                               : PointerKind::Generic;
    if (j.at("pointee").is_null())
      return TypeExpr::pointer(std::nullopt, pk);
    return TypeExpr::pointer(type_from_json(j.at("pointee")), pk);
  }
  throw std::invalid_argument("unknown type variant in IR: " + variant);
}

inline nlohmann::json class_to_json(const ClassDecl& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["kind"] = class_kind_name(c.kind);
  j["template-params"] = nlohmann::json::array();
  for (const auto& p : c.template_params) j["template-params"].push_back(p.name);
  j["bases"] = nlohmann::json::array();
  for (const auto& b : c.bases)
    j["bases"].push_back({{"name", b.name}, {"access", access_name(b.access)}});
  j["members"] = nlohmann::json::array();
  for (const auto& m : c.members) {
    nlohmann::json mj;
    mj["name"] = m.name;
    mj["type"] = type_to_json(m.type);
    mj["access"] = access_name(m.access);
    mj["serializable"] = m.serializable;
    mj["is-function"] = m.is_function;
    mj["function-signature-class"] = fn_signature_name(m.fn_signature);
    j["members"].push_back(std::move(mj));
  }
  j["has-private-or-protected"] = c.has_private_or_protected;
  return j;
}

inline Access access_from_name(const std::string& s) {
  if (s == "private") return Access::Private;
  if (s == "protected") return Access::Protected;
  return Access::Public;
}

inline ClassDecl class_from_json(const nlohmann::json& j) {
  ClassDecl c;
  c.name = j.at("name").get<std::string>();
  const std::string kind = j.at("kind").get<std::string>();
  c.kind = kind == "struct"  ? ClassKind::Struct
           : kind == "union" ? ClassKind::Union
                             : ClassKind::Class;
  for (const auto& p : j.at("template-params"))
    c.template_params.push_back(TemplateParam{"class", p.get<std::string>()});
  for (const auto& b : j.at("bases"))
    c.bases.push_back(BaseSpec{b.at("name").get<std::string>(),
                               access_from_name(b.at("access").get<std::string>())});
  for (const auto& mj : j.at("members")) {
    Member m;
    m.name = mj.at("name").get<std::string>();
    m.type = type_from_json(mj.at("type"));
    m.access = access_from_name(mj.at("access").get<std::string>());
    m.serializable = mj.at("serializable").get<bool>();
    m.is_function = mj.at("is-function").get<bool>();
    const std::string sig = mj.at("function-signature-class").get<std::string>();
    m.fn_signature = sig == "no-args"     ? FnSignature::NoArgs
                     : sig == "argc-argv" ? FnSignature::ArgcArgv
                                          : FnSignature::None;
    c.members.push_back(std::move(m));
  }
  c.has_private_or_protected = j.at("has-private-or-protected").get<bool>();
  return c;
}

}  // namespace detail

/// Export the registry as versioned JSON. Field names mirror the model:
/// classes and typedefs keyed by name, omit-set as (action, type-name)
/// pairs, single-object-set as a name list. Deterministic: keys sort.
inline std::string ir_export(const Registry& reg) {
  nlohmann::json j;
  j["ir_version"] = 1;
  j["classes"] = nlohmann::json::object();
  for (const auto& c : reg.classes()) j["classes"][c.name] = detail::class_to_json(c);
  j["typedefs"] = nlohmann::json::object();
  for (const auto& t : reg.typedefs())
    j["typedefs"][t.name] = detail::type_to_json(t.type);
  j["omit-set"] = nlohmann::json::array();
  {
    // Entries are kept in first-seen order in the registry; sort for a
    // canonical export.
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& o : reg.omit_entries())
      entries.emplace_back(o.action, o.type_name);
    std::sort(entries.begin(), entries.end());
    for (const auto& [action, type_name] : entries)
      j["omit-set"].push_back({{"action", action}, {"type-name", type_name}});
  }
  j["single-object-set"] = nlohmann::json::array();
  for (const auto& n : reg.single_object_set()) j["single-object-set"].push_back(n);
  return j.dump(2) + "\n";
}

/// Rebuild a registry from exported IR. ir_export ∘ ir_import ∘ ir_export
/// is byte-stable. Template parameter kinds are not serialized, so
/// imported template parameters read back as type parameters.
inline Registry ir_import(const std::string& text, Diagnostics& diags) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("ir_version") || j.at("ir_version").get<int>() != 1)
    throw std::invalid_argument("unsupported ir_version");

  std::vector<RawDecl> decls;
  for (const auto& [name, cj] : j.at("classes").items()) {
    (void)name;
    decls.push_back(RawDecl::make_class(detail::class_from_json(cj), {}, {}));
  }
  for (const auto& [name, tj] : j.at("typedefs").items())
    decls.push_back(
        RawDecl::make_typedef(TypedefDecl{name, detail::type_from_json(tj)}, {}, {}));
  for (const auto& oj : j.at("omit-set"))
    decls.push_back(RawDecl::make_omit(
        OmitPragma{oj.at("action").get<std::string>(),
                   oj.at("type-name").get<std::string>()},
        {}));
  for (const auto& sj : j.at("single-object-set"))
    decls.push_back(
        RawDecl::make_single_obj(SingleObjPragma{sj.get<std::string>()}, {}));
  return build_registry(decls, diags);
}

}  // namespace classdesc

#endif  // CLASSDESC_IR_HPP
