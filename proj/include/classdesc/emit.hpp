#ifndef CLASSDESC_EMIT_HPP
#define CLASSDESC_EMIT_HPP

#include <string>
#include <vector>

#include "classdesc/plan.hpp"

namespace classdesc {

/// Render one descriptor function for `action`. The shape follows the
/// classic emitted listing:
///
///   void pack(pack_t *p, string nm, test1& v)
///   {
///     pack(p,nm,(base_t)v);
///     pack(p,nm+".x",v.x);
///     pack(p,nm+".z",v.z,100);
///   }
///
/// Two emissions of the same plan are byte-identical, and two actions on
/// the same plan differ only in the action name and its `_t` buffer type.
inline std::string emit(const DescriptorPlan& plan, const std::string& action) {
  std::string out;
  if (plan.is_template()) {
    out += "template <";
    for (std::size_t i = 0; i < plan.template_params.size(); ++i) {
      if (i) out += ",";
      out += plan.template_params[i].kind_text + " " + plan.template_params[i].name;
    }
    out += ">\n";
  }
  const std::string cls = plan.spelled_name();
  out += "void " + action + "(" + action + "_t *p, string nm, " + cls + "& v)\n";
  out += "{\n";
  for (const auto& s : plan.steps) {
    out += "  ";
    switch (s.kind) {
      case PlanStep::Kind::BaseCall:
        out += action + "(p,nm,(" + s.name + ")v);";
        break;
      case PlanStep::Kind::MemberCall:
        if (s.is_function)
          out += action + "(p,nm+\"" + s.suffix + "\",v,&" + cls + "::" + s.name + ");";
        else
          out += action + "(p,nm+\"" + s.suffix + "\",v." + s.name + ");";
        break;
      case PlanStep::Kind::ArrayCall:
        out += action + "(p,nm+\"" + s.suffix + "\",v." + s.name + "," +
               std::to_string(s.extent) + ");";
        break;
      case PlanStep::Kind::PointerWarn:
        out += "classdesc_ptr_warning(p,nm+\"" + s.suffix + "\");";
        break;
      case PlanStep::Kind::SingleObjectCall:
        out += action + "_single_obj(p,nm+\"" + s.suffix + "\",v." + s.name + ");";
        break;
      case PlanStep::Kind::UnionBlob:
        out += action + "_raw(p,nm,&v," + std::to_string(s.byte_size) + ");";
        break;
      case PlanStep::Kind::OmittedTypeCall:
        out += action + "(p,nm+\"" + s.suffix + "\",v." + s.name + ");";
        break;
    }
    out += "\n";
  }
  out += "}\n";
  return out;
}

/// Render a whole descriptor file for one input header: the runtime
/// include, then one descriptor per plan, blank-line separated.
inline std::string emit_descriptor_file(const std::vector<DescriptorPlan>& plans,
                                        const std::string& action) {
  std::string out = "#include \"" + action + "_base.h\"\n";
  for (const auto& p : plans) {
    out += "\n";
    out += emit(p, action);
  }
  return out;
}

/// The access-macro definitions granting descriptors entry to private and
/// protected regions: one friend declaration per action, plus the `<>`
/// template form.
inline std::string emit_access_macros(const std::vector<std::string>& actions) {
  auto friends = [&](bool tmpl) {
    std::string out;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const std::string& a = actions[i];
      out += "friend void " + a + (tmpl ? "<>" : "") + "(" + a + "_t *,string,type&);";
      if (i + 1 < actions.size()) out += "\\";
      out += "\n";
    }
    return out;
  };
  std::string out;
  out += "#define CLASSDESC_ACCESS(type)\\\n";
  out += friends(false);
  out += "\n";
  out += "#define CLASSDESC_ACCESS_TEMPLATE(type)\\\n";
  out += friends(true);
  return out;
}

}  // namespace classdesc

#endif  // CLASSDESC_EMIT_HPP
