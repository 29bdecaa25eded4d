#ifndef CLASSDESC_REGISTRY_HPP
#define CLASSDESC_REGISTRY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/diagnostics.hpp"

namespace classdesc {

namespace detail {

// How a primitive kind is commonly spelled in source; lets a pragma or CLI
// flag name a builtin pointee ('#pragma single_obj_ptr int').
inline const char* primitive_cxx_spelling(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Bool: return "bool";
    case PrimitiveKind::Char: return "char";
    case PrimitiveKind::SInt8: return "signed char";
    case PrimitiveKind::SInt16: return "short";
    case PrimitiveKind::SInt32: return "int";
    case PrimitiveKind::SInt64: return "long";
    case PrimitiveKind::UInt8: return "unsigned char";
    case PrimitiveKind::UInt16: return "unsigned short";
    case PrimitiveKind::UInt32: return "unsigned int";
    case PrimitiveKind::UInt64: return "unsigned long";
    case PrimitiveKind::Float32: return "float";
    case PrimitiveKind::Float64: return "double";
  }
  return "?";
}

}  // namespace detail

/// The resolved model of one or more parsed units: classes in declaration
/// order, typedefs flattened to their final types, the omit set and the
/// single-object pointer set. Immutable once built except for
/// mark_single_object, which is how CLI flags feed in.
class Registry {
 public:
  const std::vector<ClassDecl>& classes() const { return classes_; }

  const ClassDecl* find_class(const std::string& name) const {
    auto it = class_index_.find(name);
    return it == class_index_.end() ? nullptr : &classes_[it->second];
  }

  /// Typedefs with their types fully resolved, in declaration order.
  const std::vector<TypedefDecl>& typedefs() const { return typedefs_; }

  const TypeExpr* find_typedef(const std::string& name) const {
    auto it = typedef_map_.find(name);
    return it == typedef_map_.end() ? nullptr : &it->second;
  }

  /// Omit entries as (action-or-ALL, type-name), deduplicated, first-seen order.
  const std::vector<OmitPragma>& omit_entries() const { return omits_; }

  bool is_omitted(const std::string& action, const std::string& type_name) const {
    return omit_set_.count({action, type_name}) > 0 ||
           omit_set_.count({"ALL", type_name}) > 0;
  }

  const std::set<std::string>& single_object_set() const { return single_obj_; }

  bool in_single_object_set(const std::string& name) const {
    return single_obj_.count(name) > 0;
  }

  /// Idempotent; the CLI calls this for each --single-obj flag.
  void mark_single_object(const std::string& type_name) {
    single_obj_.insert(type_name);
  }

  /// Substitute typedef names by their final types. Names listed in
  /// `exclude` (template parameters) are left alone, as are names of
  /// registered classes and unknown names.
  TypeExpr resolve(const TypeExpr& t,
                   const std::vector<TemplateParam>& exclude = {}) const {
    switch (t.variant()) {
      case TypeExpr::Variant::Primitive:
        return t;
      case TypeExpr::Variant::Named: {
        for (const auto& p : exclude)
          if (p.name == t.name()) return t;
        auto it = typedef_map_.find(t.name());
        return it == typedef_map_.end() ? t : it->second;
      }
      case TypeExpr::Variant::Array:
        return TypeExpr::array(resolve(t.element(), exclude), t.extent());
      case TypeExpr::Variant::Pointer:
        if (!t.has_pointee()) return t;
        return TypeExpr::pointer(resolve(t.pointee(), exclude), t.pointer_kind());
    }
    return t;
  }

 private:
  friend Registry build_registry(const std::vector<RawDecl>&, Diagnostics&);

  void add_class(ClassDecl c) {
    class_index_[c.name] = classes_.size();
    classes_.push_back(std::move(c));
  }

  std::vector<ClassDecl> classes_;
  std::map<std::string, std::size_t> class_index_;
  std::vector<TypedefDecl> typedefs_;
  std::map<std::string, TypeExpr> typedef_map_;
  std::vector<OmitPragma> omits_;
  std::set<std::pair<std::string, std::string>> omit_set_;
  std::set<std::string> single_obj_;
};

namespace detail {

// Resolves one typedef target against the raw (unresolved) map. `path`
// carries the chain followed so far; revisiting a name means a cycle.
// Returns nullopt on a cycle.
inline std::optional<TypeExpr> resolve_raw(
    const TypeExpr& t, const std::map<std::string, TypeExpr>& raw,
    std::set<std::string>& path) {
  switch (t.variant()) {
    case TypeExpr::Variant::Primitive:
      return t;
    case TypeExpr::Variant::Named: {
      auto it = raw.find(t.name());
      if (it == raw.end()) return t;
      if (!path.insert(t.name()).second) return std::nullopt;
      auto r = resolve_raw(it->second, raw, path);
      path.erase(t.name());
      return r;
    }
    case TypeExpr::Variant::Array: {
      auto e = resolve_raw(t.element(), raw, path);
      if (!e) return std::nullopt;
      return TypeExpr::array(std::move(*e), t.extent());
    }
    case TypeExpr::Variant::Pointer: {
      if (!t.has_pointee()) return t;
      auto p = resolve_raw(t.pointee(), raw, path);
      if (!p) return std::nullopt;
      return TypeExpr::pointer(std::move(*p), t.pointer_kind());
    }
  }
  return t;
}

}  // namespace detail

/// Build the registry from parsed declarations (possibly several files'
/// worth). Duplicate identical declarations collapse silently; conflicting
/// redefinitions and typedef cycles are errors.
inline Registry build_registry(const std::vector<RawDecl>& decls,
                               Diagnostics& diags) {
  Registry reg;

  auto error_at = [&](const std::string& msg, SourcePos pos) {
    diags.push_back(Diagnostic{Severity::Error, msg, pos.line, pos.column, {}});
  };

  // Pass 1: collect raw entries, catching redefinitions.
  std::map<std::string, TypeExpr> raw_typedefs;
  std::vector<TypedefDecl> typedef_order;
  for (const auto& d : decls) {
    switch (d.variant) {
      case RawDecl::Variant::Class: {
        const ClassDecl* existing = reg.find_class(d.class_decl.name);
        if (existing) {
          if (*existing != d.class_decl)
            error_at("conflicting redefinition of '" + d.class_decl.name + "'",
                     d.begin);
          break;
        }
        reg.add_class(d.class_decl);
        break;
      }
      case RawDecl::Variant::Typedef: {
        auto it = raw_typedefs.find(d.typedef_decl.name);
        if (it != raw_typedefs.end()) {
          if (it->second != d.typedef_decl.type)
            error_at(
                "conflicting typedef redefinition of '" + d.typedef_decl.name + "'",
                d.begin);
          break;
        }
        raw_typedefs.emplace(d.typedef_decl.name, d.typedef_decl.type);
        typedef_order.push_back(d.typedef_decl);
        break;
      }
      case RawDecl::Variant::Omit:
        if (reg.omit_set_.insert({d.omit.action, d.omit.type_name}).second)
          reg.omits_.push_back(d.omit);
        break;
      case RawDecl::Variant::SingleObj:
        reg.mark_single_object(d.single_obj.type_name);
        break;
    }
  }

  // Pass 2: flatten typedef chains; drop the ones caught in cycles.
  for (const auto& td : typedef_order) {
    std::set<std::string> path{td.name};
    auto resolved = detail::resolve_raw(td.type, raw_typedefs, path);
    if (!resolved) {
      diags.push_back(Diagnostic{Severity::Error,
                                 "typedef cycle detected involving '" + td.name + "'",
                                 0, 0, {}});
      continue;
    }
    reg.typedef_map_.emplace(td.name, *resolved);
    reg.typedefs_.push_back(TypedefDecl{td.name, std::move(*resolved)});
  }

  // Pass 3: resolve member types against the flattened typedefs. Template
  // parameter names shadow typedefs inside their class.
  for (auto& cls : reg.classes_) {
    for (auto& m : cls.members)
      m.type = reg.resolve(m.type, cls.template_params);
  }

  return reg;
}

/// Classify a pointer type. Member pointers were marked by the parser from
/// declarator syntax; a pointee type whose name was marked single-object
/// gives a single-object pointer; everything else, function pointers with
/// unknowable pointees included, stays generic.
inline PointerKind classify_pointer(const TypeExpr& t, const Registry& reg) {
  if (!t.is_pointer()) return PointerKind::Generic;
  if (t.pointer_kind() == PointerKind::MemberPointer)
    return PointerKind::MemberPointer;
  if (!t.has_pointee()) return PointerKind::Generic;

  const TypeExpr& pointee = t.pointee();
  if (pointee.is_named()) {
    if (reg.in_single_object_set(pointee.name())) return PointerKind::SingleObject;
    const TypeExpr* resolved = reg.find_typedef(pointee.name());
    if (resolved && resolved->is_named() &&
        reg.in_single_object_set(resolved->name()))
      return PointerKind::SingleObject;
  } else if (pointee.is_primitive()) {
    PrimitiveKind k = pointee.primitive_kind();
    if (reg.in_single_object_set(detail::primitive_cxx_spelling(k)) ||
        reg.in_single_object_set(primitive_name(k)))
      return PointerKind::SingleObject;
  }
  return PointerKind::Generic;
}

}  // namespace classdesc

#endif  // CLASSDESC_REGISTRY_HPP
