#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "classdesc/ir.hpp"
#include "classdesc/parser.hpp"
#include "classdesc/registry.hpp"

using namespace classdesc;

namespace {

Registry registry_of(const std::string& src, Diagnostics& diags) {
  ParseResult r = parse_source(src);
  diags = r.diagnostics;
  Diagnostics reg_diags;
  Registry reg = build_registry(r.decls, reg_diags);
  diags.insert(diags.end(), reg_diags.begin(), reg_diags.end());
  return reg;
}

Registry registry_of(const std::string& src) {
  Diagnostics diags;
  Registry reg = registry_of(src, diags);
  REQUIRE(!has_errors(diags));
  return reg;
}

}  // namespace

TEST_CASE("reference class registers alone with an empty omit set") {
  Registry reg = registry_of(
      "class test1: base_t { int x,y; public: double z[100]; };");
  REQUIRE(reg.classes().size() == 1);
  CHECK(reg.classes()[0].name == "test1");
  CHECK(reg.omit_entries().empty());
}

TEST_CASE("empty input builds an empty registry") {
  Diagnostics diags;
  Registry reg = build_registry({}, diags);
  CHECK(reg.classes().empty());
  CHECK(reg.typedefs().empty());
  CHECK(diags.empty());
}

TEST_CASE("typedefs resolve member types to primitives") {
  Registry reg = registry_of(
      "typedef int myint;\n"
      "class C { myint a; };\n");
  const ClassDecl* c = reg.find_class("C");
  REQUIRE(c != nullptr);
  REQUIRE(c->members.size() == 1);
  CHECK(c->members[0].type == TypeExpr::primitive(PrimitiveKind::SInt32));
}

TEST_CASE("typedef chains flatten to the final type") {
  Registry reg = registry_of(
      "typedef double real;\n"
      "typedef real scalar;\n"
      "typedef scalar weight;\n"
      "struct S { weight w; };\n");
  const TypeExpr* t = reg.find_typedef("weight");
  REQUIRE(t != nullptr);
  CHECK(*t == TypeExpr::primitive(PrimitiveKind::Float64));
  CHECK(reg.find_class("S")->members[0].type ==
        TypeExpr::primitive(PrimitiveKind::Float64));
}

TEST_CASE("typedef cycles are diagnosed and dropped") {
  Diagnostics diags;
  Registry reg = registry_of(
      "typedef A B;\n"
      "typedef B A;\n",
      diags);
  CHECK(has_errors(diags));
  bool mentioned = false;
  for (const auto& d : diags)
    if (d.message.find("typedef cycle") != std::string::npos) mentioned = true;
  CHECK(mentioned);
  CHECK(reg.find_typedef("A") == nullptr);
  CHECK(reg.find_typedef("B") == nullptr);
}

TEST_CASE("identical duplicate definitions collapse silently") {
  Diagnostics diags;
  Registry reg = registry_of(
      "struct S { int a; };\n"
      "struct S { int a; };\n",
      diags);
  CHECK(!has_errors(diags));
  CHECK(reg.classes().size() == 1);
}

TEST_CASE("conflicting duplicate definitions are an error") {
  Diagnostics diags;
  registry_of(
      "struct S { int a; };\n"
      "struct S { double a; };\n",
      diags);
  REQUIRE(has_errors(diags));
  bool mentioned = false;
  for (const auto& d : diags)
    if (d.message.find("conflicting redefinition of 'S'") != std::string::npos)
      mentioned = true;
  CHECK(mentioned);
}

TEST_CASE("member pointers classify as member-pointer") {
  Registry reg = registry_of("struct C { int C::*mp; };");
  const ClassDecl* c = reg.find_class("C");
  REQUIRE(c != nullptr);
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::MemberPointer);
}

TEST_CASE("pointers to marked types classify as single-object") {
  Registry reg = registry_of("struct node { node *next; };");
  const ClassDecl* c = reg.find_class("node");
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::Generic);
  reg.mark_single_object("node");
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::SingleObject);
}

TEST_CASE("single-object marking survives typedef indirection") {
  Registry reg = registry_of(
      "typedef struct { int v; } cell;\n"
      "typedef cell cell_alias;\n"
      "struct list { cell_alias *head; };\n");
  reg.mark_single_object("cell");
  const ClassDecl* c = reg.find_class("list");
  REQUIRE(c != nullptr);
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::SingleObject);
}

TEST_CASE("function pointers classify generic even behind typedefs") {
  Registry reg = registry_of(
      "typedef void (*callback)(int);\n"
      "struct holder { callback cb; };\n");
  const ClassDecl* c = reg.find_class("holder");
  REQUIRE(c != nullptr);
  REQUIRE(c->members[0].type.is_pointer());
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::Generic);
}

TEST_CASE("classify_pointer is total over pointer shapes") {
  Registry reg = registry_of("struct S {};");
  // No pointee at all.
  CHECK(classify_pointer(TypeExpr::pointer(std::nullopt, PointerKind::Generic),
                         reg) == PointerKind::Generic);
  // Pointee nobody ever declared.
  CHECK(classify_pointer(
            TypeExpr::pointer(TypeExpr::named("ghost"), PointerKind::Generic),
            reg) == PointerKind::Generic);
  // Pointer to pointer.
  CHECK(classify_pointer(
            TypeExpr::pointer(
                TypeExpr::pointer(TypeExpr::primitive(PrimitiveKind::SInt32),
                                  PointerKind::Generic),
                PointerKind::Generic),
            reg) == PointerKind::Generic);
}

TEST_CASE("mark_single_object is idempotent") {
  Registry reg = registry_of("struct node { node *next; };");
  reg.mark_single_object("node");
  auto once = reg.single_object_set();
  reg.mark_single_object("node");
  CHECK(reg.single_object_set() == once);
}

TEST_CASE("marking an unused name changes no classification") {
  Registry reg = registry_of("struct S { int *p; };");
  reg.mark_single_object("never_used");
  const ClassDecl* c = reg.find_class("S");
  CHECK(classify_pointer(c->members[0].type, reg) == PointerKind::Generic);
}

TEST_CASE("omit set answers action-specific and ALL queries") {
  Registry reg = registry_of(
      "#pragma omit pack mytype\n"
      "#pragma omit everything\n");
  CHECK(reg.is_omitted("pack", "mytype"));
  CHECK(!reg.is_omitted("unpack", "mytype"));
  CHECK(reg.is_omitted("pack", "everything"));
  CHECK(reg.is_omitted("unpack", "everything"));
  CHECK(!reg.is_omitted("pack", "other"));
}

TEST_CASE("unknown member types stay named without eager errors") {
  Diagnostics diags;
  Registry reg = registry_of("struct S { othertype o; };", diags);
  CHECK(!has_errors(diags));  // only the emitter needs the name
  CHECK(reg.find_class("S")->members[0].type == TypeExpr::named("othertype"));
}

TEST_CASE("resolve leaves template parameters alone") {
  Registry reg = registry_of(
      "typedef int T;\n"  // a typedef shadowing the parameter name
      "template <class T> struct box { T contents; };\n");
  const ClassDecl* c = reg.find_class("box");
  REQUIRE(c != nullptr);
  // The member type must remain the parameter, not the typedef.
  CHECK(c->members[0].type == TypeExpr::named("T"));
}

TEST_CASE("IR round-trips byte-identically") {
  Registry reg = registry_of(
      "#pragma omit pack mytype\n"
      "#pragma single_obj_ptr node\n"
      "typedef unsigned short port_t;\n"
      "class base_t { public: int b; };\n"
      "class test1: base_t { int x,y; public: double z[100]; };\n"
      "struct node { node *next; int v; };\n"
      "union U { int i; double d; };\n"
      "template <class T> struct box { T contents[4]; };\n"
      "struct funcs { void f(); int g(int argc, char *argv[]); };\n");
  std::string first = ir_export(reg);

  Diagnostics diags;
  Registry back = ir_import(first, diags);
  REQUIRE(!has_errors(diags));
  std::string second = ir_export(back);
  CHECK(first == second);
}

TEST_CASE("IR export carries the documented field names") {
  Registry reg = registry_of(
      "#pragma omit pack mytype\n"
      "class test1 { int x; public: double z[3]; };\n");
  std::string ir = ir_export(reg);
  CHECK(ir.find("\"ir_version\": 1") != std::string::npos);
  CHECK(ir.find("\"template-params\"") != std::string::npos);
  CHECK(ir.find("\"has-private-or-protected\"") != std::string::npos);
  CHECK(ir.find("\"is-function\"") != std::string::npos);
  CHECK(ir.find("\"function-signature-class\"") != std::string::npos);
  CHECK(ir.find("\"omit-set\"") != std::string::npos);
  CHECK(ir.find("\"single-object-set\"") != std::string::npos);
  CHECK(ir.find("\"extent\": 3") != std::string::npos);
}

TEST_CASE("IR import rejects unknown versions") {
  Diagnostics diags;
  CHECK_THROWS_AS(ir_import("{\"ir_version\": 2}", diags), std::exception);
}

TEST_CASE("pointer kinds survive the IR") {
  Registry reg = registry_of(
      "#pragma single_obj_ptr node\n"
      "struct node { node *next; int C::*mp; char *s; };\n");
  Diagnostics diags;
  Registry back = ir_import(ir_export(reg), diags);
  REQUIRE(!has_errors(diags));
  const ClassDecl* c = back.find_class("node");
  REQUIRE(c != nullptr);
  CHECK(classify_pointer(c->members[0].type, back) == PointerKind::SingleObject);
  CHECK(classify_pointer(c->members[1].type, back) == PointerKind::MemberPointer);
  CHECK(classify_pointer(c->members[2].type, back) == PointerKind::Generic);
}

TEST_CASE("resolve is idempotent") {
  Registry reg = registry_of(
      "typedef int myint;\n"
      "typedef myint deeper;\n"
      "struct S { deeper d; };\n"
      "#pragma single_obj_ptr S\n");
  const TypeExpr exprs[] = {
      TypeExpr::primitive(PrimitiveKind::Float64),
      TypeExpr::named("deeper"),
      TypeExpr::named("S"),
      TypeExpr::array(TypeExpr::named("myint"), 5),
      TypeExpr::pointer(TypeExpr::named("S"), PointerKind::Generic),
  };
  for (const TypeExpr& t : exprs) {
    TypeExpr once = reg.resolve(t);
    CHECK(reg.resolve(once) == once);
  }
}
