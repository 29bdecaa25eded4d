#ifndef CLASSDESC_PLAN_HPP
#define CLASSDESC_PLAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "classdesc/ast.hpp"
#include "classdesc/diagnostics.hpp"
#include "classdesc/registry.hpp"

namespace classdesc {

/// One line of a descriptor body. A flat struct rather than a variant:
/// only the fields relevant to `kind` are meaningful.
struct PlanStep {
  enum class Kind {
    BaseCall,         // pack(p,nm,(base_t)v);
    MemberCall,       // pack(p,nm+".x",v.x);
    ArrayCall,        // pack(p,nm+".z",v.z,100);
    PointerWarn,      // classdesc_ptr_warning(p,nm+".s");
    SingleObjectCall, // pack_single_obj(p,nm+".next",v.next);
    UnionBlob,        // pack_raw(p,nm,&v,12);
    OmittedTypeCall,  // pack(p,nm+".m",v.m); definition user-supplied
  };

  Kind kind = Kind::MemberCall;
  std::string name;       // base name, or member name
  Access access = Access::Public;          // BaseCall
  std::string suffix;                      // ".x" for member-derived steps
  TypeExpr type = TypeExpr::named("");     // member type / array element type
  std::size_t extent = 0;                  // ArrayCall: flattened element count
  PointerKind pointer_kind = PointerKind::Generic;  // PointerWarn
  std::string pointee_name;                // SingleObjectCall
  std::size_t byte_size = 0;               // UnionBlob
  std::string type_name;                   // OmittedTypeCall
  bool is_function = false;                // MemberCall in TCL_obj context
  FnSignature fn_signature = FnSignature::None;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// The ordered recipe for one class's descriptor: all base calls first,
/// then one step per serializable member in declaration order.
struct DescriptorPlan {
  std::string class_name;
  std::vector<TemplateParam> template_params;
  std::vector<PlanStep> steps;

  bool is_template() const { return !template_params.empty(); }

  /// "Foo" or "Foo<T,U>" for templates; how the class is spelled at its
  /// own scope.
  std::string spelled_name() const {
    if (template_params.empty()) return class_name;
    std::string s = class_name + "<";
    for (std::size_t i = 0; i < template_params.size(); ++i) {
      if (i) s += ",";
      s += template_params[i].name;
    }
    return s + ">";
  }
};

namespace detail {

inline bool is_template_param_name(const ClassDecl& cls, const std::string& n) {
  for (const auto& p : cls.template_params)
    if (p.name == n) return true;
  return false;
}

}  // namespace detail

/// Compute the descriptor plan for `cls` under `action`. Members whose
/// named type is neither registered, omitted, nor a template parameter are
/// diagnosed ("no descriptor possible") and produce no step; the caller
/// checks diagnostics before emitting.
inline DescriptorPlan plan(const ClassDecl& cls, const Registry& reg,
                           const std::string& action, Diagnostics& diags) {
  DescriptorPlan out;
  out.class_name = cls.name;
  out.template_params = cls.template_params;

  auto error = [&](const std::string& msg) {
    diags.push_back(Diagnostic{Severity::Error, msg, 0, 0, {}});
  };

  if (cls.kind == ClassKind::Union) {
    // One raw blob covering the widest member. No portable way exists to
    // know which member is live, so the bytes travel as-is.
    std::size_t widest = 0;
    bool any = false;
    bool failed = false;
    for (const auto& m : cls.members) {
      if (!m.serializable) continue;
      any = true;
      auto w = fixed_width(m.type);
      if (!w) {
        error("union member '" + cls.name + "::" + m.name + "' of type '" +
              type_to_string(m.type) + "' has no fixed width; no descriptor possible");
        failed = true;
        continue;
      }
      if (*w > widest) widest = *w;
    }
    if (any && !failed) {
      PlanStep s;
      s.kind = PlanStep::Kind::UnionBlob;
      s.byte_size = widest;
      out.steps.push_back(std::move(s));
    }
    return out;
  }

  for (const auto& b : cls.bases) {
    PlanStep s;
    s.kind = PlanStep::Kind::BaseCall;
    s.name = b.name;
    s.access = b.access;
    out.steps.push_back(std::move(s));
  }

  // A named member type is usable when a descriptor for it will exist:
  // registered here, assumed user-supplied (omit set), or deferred to
  // instantiation for template classes.
  auto named_is_usable = [&](const std::string& n) {
    return reg.find_class(n) != nullptr || reg.is_omitted(action, n) ||
           detail::is_template_param_name(cls, n) || cls.is_template();
  };

  for (const auto& m : cls.members) {
    if (m.is_function) {
      // Only the binding action touches functions, and only those callable
      // from a script: no arguments, or the (int, char*[]) shape.
      if (action == "TCL_obj" && m.fn_signature != FnSignature::None) {
        PlanStep s;
        s.kind = PlanStep::Kind::MemberCall;
        s.name = m.name;
        s.suffix = "." + m.name;
        s.type = m.type;
        s.is_function = true;
        s.fn_signature = m.fn_signature;
        out.steps.push_back(std::move(s));
      }
      continue;
    }
    if (!m.serializable) continue;

    TypeExpr t = m.type;
    std::string suffix = "." + m.name;

    if (t.is_array()) {
      // Multidimensional arrays flatten to one element count.
      std::size_t extent = 1;
      const TypeExpr* elem = &t;
      while (elem->is_array()) {
        extent *= elem->extent();
        elem = &elem->element();
      }
      if (elem->is_pointer()) {
        PointerKind k = classify_pointer(*elem, reg);
        if (k == PointerKind::SingleObject) {
          // An array of flagged pointers serializes element-wise.
          PlanStep s;
          s.kind = PlanStep::Kind::ArrayCall;
          s.name = m.name;
          s.suffix = suffix;
          s.type = *elem;
          s.extent = extent;
          out.steps.push_back(std::move(s));
        } else {
          PlanStep s;
          s.kind = PlanStep::Kind::PointerWarn;
          s.name = m.name;
          s.suffix = suffix;
          s.pointer_kind = k;
          out.steps.push_back(std::move(s));
        }
        continue;
      }
      if (elem->is_named() && !named_is_usable(elem->name())) {
        error("no descriptor possible for '" + cls.name + "::" + m.name +
              "': element type '" + elem->name() + "' is not declared");
        continue;
      }
      PlanStep s;
      s.kind = PlanStep::Kind::ArrayCall;
      s.name = m.name;
      s.suffix = suffix;
      s.type = *elem;
      s.extent = extent;
      out.steps.push_back(std::move(s));
      continue;
    }

    if (t.is_pointer()) {
      PointerKind k = classify_pointer(t, reg);
      if (k == PointerKind::SingleObject) {
        PlanStep s;
        s.kind = PlanStep::Kind::SingleObjectCall;
        s.name = m.name;
        s.suffix = suffix;
        s.pointee_name = type_to_string(t.pointee());
        out.steps.push_back(std::move(s));
      } else {
        PlanStep s;
        s.kind = PlanStep::Kind::PointerWarn;
        s.name = m.name;
        s.suffix = suffix;
        s.pointer_kind = k;
        out.steps.push_back(std::move(s));
      }
      continue;
    }

    if (t.is_named()) {
      if (reg.is_omitted(action, t.name())) {
        PlanStep s;
        s.kind = PlanStep::Kind::OmittedTypeCall;
        s.name = m.name;
        s.suffix = suffix;
        s.type_name = t.name();
        out.steps.push_back(std::move(s));
        continue;
      }
      if (!named_is_usable(t.name())) {
        error("no descriptor possible for '" + cls.name + "::" + m.name +
              "': type '" + t.name() + "' is not declared");
        continue;
      }
    }

    PlanStep s;
    s.kind = PlanStep::Kind::MemberCall;
    s.name = m.name;
    s.suffix = suffix;
    s.type = t;
    out.steps.push_back(std::move(s));
  }

  return out;
}

}  // namespace classdesc

#endif  // CLASSDESC_PLAN_HPP
