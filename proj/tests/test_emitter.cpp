#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "classdesc/emit.hpp"
#include "classdesc/parser.hpp"
#include "classdesc/plan.hpp"
#include "classdesc/registry.hpp"
#include "classdesc/rewrite.hpp"

#include "support.hpp"

using namespace classdesc;
using testsupport::code_tokens;
using testsupport::replace_all;

namespace {

const char* kReferenceClass =
    "class test1: base_t\n"
    "{\n"
    "  int x,y;\n"
    "public:\n"
    "  double z[100];\n"
    "};\n";

// The emitted listing the generator must reproduce (token-for-token).
const char* kReferenceListing =
    "#include \"pack_base.h\"\n"
    "void pack(pack_t *p, string nm, test1& v)\n"
    "{\n"
    "   pack(p,nm,(base_t)v);\n"
    "   pack(p,nm+\".x\",v.x);\n"
    "   pack(p,nm+\".y\",v.y);\n"
    "   pack(p,nm+\".z\",v.z,100);\n"
    "}\n";

Registry registry_of(const std::string& src) {
  ParseResult r = parse_source(src);
  REQUIRE(!has_errors(r.diagnostics));
  Diagnostics diags;
  Registry reg = build_registry(r.decls, diags);
  REQUIRE(!has_errors(diags));
  return reg;
}

DescriptorPlan plan_of(const Registry& reg, const std::string& cls,
                       const std::string& action = "pack") {
  const ClassDecl* c = reg.find_class(cls);
  REQUIRE(c != nullptr);
  Diagnostics diags;
  DescriptorPlan p = plan(*c, reg, action, diags);
  REQUIRE(!has_errors(diags));
  return p;
}

}  // namespace

TEST_CASE("reference class plans to the exact four steps") {
  Registry reg = registry_of(kReferenceClass);
  DescriptorPlan p = plan_of(reg, "test1");
  REQUIRE(p.steps.size() == 4);
  CHECK(p.steps[0].kind == PlanStep::Kind::BaseCall);
  CHECK(p.steps[0].name == "base_t");
  CHECK(p.steps[1].kind == PlanStep::Kind::MemberCall);
  CHECK(p.steps[1].name == "x");
  CHECK(p.steps[1].suffix == ".x");
  CHECK(p.steps[2].kind == PlanStep::Kind::MemberCall);
  CHECK(p.steps[2].name == "y");
  CHECK(p.steps[3].kind == PlanStep::Kind::ArrayCall);
  CHECK(p.steps[3].name == "z");
  CHECK(p.steps[3].extent == 100);
}

TEST_CASE("emitted descriptor file is token-equivalent to the reference listing") {
  Registry reg = registry_of(kReferenceClass);
  std::string text = emit_descriptor_file({plan_of(reg, "test1")}, "pack");
  CHECK(code_tokens(text) == code_tokens(kReferenceListing));
}

TEST_CASE("empty class emits an empty descriptor body") {
  Registry reg = registry_of("class E {};");
  DescriptorPlan p = plan_of(reg, "E");
  CHECK(p.steps.empty());
  std::string text = emit(p, "pack");
  CHECK(text ==
        "void pack(pack_t *p, string nm, E& v)\n"
        "{\n"
        "}\n");
}

TEST_CASE("generic pointer members plan to a warning step") {
  Registry reg = registry_of("struct S { char *s; };");
  DescriptorPlan p = plan_of(reg, "S");
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].kind == PlanStep::Kind::PointerWarn);
  std::string text = emit(p, "pack");
  CHECK(text.find("classdesc_ptr_warning(p,nm+\".s\");") != std::string::npos);
}

TEST_CASE("member pointers also plan to a warning step") {
  Registry reg = registry_of("struct S { int S::*mp; };");
  DescriptorPlan p = plan_of(reg, "S");
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].kind == PlanStep::Kind::PointerWarn);
  CHECK(p.steps[0].pointer_kind == PointerKind::MemberPointer);
}

TEST_CASE("single-object pointers plan to the _single_obj call") {
  Registry reg = registry_of(
      "#pragma single_obj_ptr node\n"
      "struct node { node *next; int v; };\n");
  DescriptorPlan p = plan_of(reg, "node");
  REQUIRE(p.steps.size() == 2);
  CHECK(p.steps[0].kind == PlanStep::Kind::SingleObjectCall);
  std::string text = emit(p, "pack");
  CHECK(text.find("pack_single_obj(p,nm+\".next\",v.next);") !=
        std::string::npos);
}

TEST_CASE("action substitution is the only difference between actions") {
  Registry reg = registry_of(kReferenceClass);
  DescriptorPlan p = plan_of(reg, "test1");
  std::string packed = emit(p, "pack");
  std::string unpacked = emit(p, "unpack");
  CHECK(replace_all(packed, "pack", "unpack") == unpacked);
}

TEST_CASE("emission is deterministic") {
  Registry reg = registry_of(kReferenceClass);
  DescriptorPlan p = plan_of(reg, "test1");
  CHECK(emit(p, "pack") == emit(p, "pack"));
  CHECK(emit_descriptor_file({p}, "pack") == emit_descriptor_file({p}, "pack"));
}

TEST_CASE("member order in the text matches declaration order") {
  Registry reg = registry_of("struct S { int c; int a; int b; };");
  std::string text = emit(plan_of(reg, "S"), "pack");
  std::size_t c = text.find(".c");
  std::size_t a = text.find(".a");
  std::size_t b = text.find(".b");
  REQUIRE(c != std::string::npos);
  REQUIRE(a != std::string::npos);
  REQUIRE(b != std::string::npos);
  CHECK(c < a);
  CHECK(a < b);
}

TEST_CASE("omitted member types still get their call emitted") {
  Registry reg = registry_of(
      "#pragma omit pack mytype\n"
      "struct S { mytype m; int x; };\n");
  DescriptorPlan p = plan_of(reg, "S");
  REQUIRE(p.steps.size() == 2);
  CHECK(p.steps[0].kind == PlanStep::Kind::OmittedTypeCall);
  std::string text = emit(p, "pack");
  CHECK(text.find("pack(p,nm+\".m\",v.m);") != std::string::npos);
}

TEST_CASE("undeclared member types make a descriptor impossible") {
  Registry reg = registry_of("struct S { ghost g; };");
  const ClassDecl* c = reg.find_class("S");
  Diagnostics diags;
  plan(*c, reg, "pack", diags);
  REQUIRE(has_errors(diags));
  CHECK(diags[0].message.find("no descriptor possible") != std::string::npos);
  CHECK(diags[0].message.find("ghost") != std::string::npos);
}

TEST_CASE("unions plan to one raw blob of the widest member") {
  Registry reg = registry_of("union U { int i; double d; char c; };");
  DescriptorPlan p = plan_of(reg, "U");
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].kind == PlanStep::Kind::UnionBlob);
  CHECK(p.steps[0].byte_size == 8);
  std::string text = emit(p, "pack");
  CHECK(text.find("pack_raw(p,nm,&v,8);") != std::string::npos);
}

TEST_CASE("union members without a fixed width are an error") {
  Registry reg = registry_of("union U { int i; char *p; };");
  const ClassDecl* c = reg.find_class("U");
  Diagnostics diags;
  plan(*c, reg, "pack", diags);
  REQUIRE(has_errors(diags));
  CHECK(diags[0].message.find("no fixed width") != std::string::npos);
}

TEST_CASE("multidimensional arrays flatten to one extent") {
  Registry reg = registry_of("struct S { int m[2][3]; };");
  DescriptorPlan p = plan_of(reg, "S");
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0].kind == PlanStep::Kind::ArrayCall);
  CHECK(p.steps[0].extent == 6);
  std::string text = emit(p, "pack");
  CHECK(text.find("pack(p,nm+\".m\",v.m,6);") != std::string::npos);
}

TEST_CASE("template classes emit templated descriptors") {
  Registry reg = registry_of("template <class T> struct box { T contents[4]; };");
  DescriptorPlan p = plan_of(reg, "box");
  std::string text = emit(p, "pack");
  CHECK(text.find("template <class T>") == 0);
  CHECK(text.find("box<T>& v") != std::string::npos);
  CHECK(text.find("pack(p,nm+\".contents\",v.contents,4);") != std::string::npos);
}

TEST_CASE("functions appear only in TCL_obj plans") {
  Registry reg = registry_of(
      "struct S {\n"
      "  int x;\n"
      "  void step();\n"
      "  int run(int argc, char *argv[]);\n"
      "  double helper(double);\n"
      "};\n");
  DescriptorPlan packp = plan_of(reg, "S", "pack");
  REQUIRE(packp.steps.size() == 1);  // just x

  DescriptorPlan tclp = plan_of(reg, "S", "TCL_obj");
  REQUIRE(tclp.steps.size() == 3);  // x, step, run; helper's signature disqualifies
  std::string text = emit(tclp, "TCL_obj");
  CHECK(text.find("TCL_obj(p,nm+\".x\",v.x);") != std::string::npos);
  CHECK(text.find("TCL_obj(p,nm+\".step\",v,&S::step);") != std::string::npos);
  CHECK(text.find("TCL_obj(p,nm+\".run\",v,&S::run);") != std::string::npos);
  CHECK(text.find("helper") == std::string::npos);
}

TEST_CASE("access macro definitions match the published shape") {
  std::string text = emit_access_macros({"pack", "unpack"});
  // The published listing, with the string parameter type this runtime uses.
  const char* expected =
      "#define CLASSDESC_ACCESS(type)\\\n"
      "friend void pack(pack_t *,string,type&);\\\n"
      "friend void unpack(unpack_t *,string,type&);\n"
      "\n"
      "#define CLASSDESC_ACCESS_TEMPLATE(type)\\\n"
      "friend void pack<>(pack_t *,string,type&);\\\n"
      "friend void unpack<>(unpack_t *,string,type&);\n";
  CHECK(text == expected);
}

TEST_CASE("access macros scale with the action list") {
  std::string one = emit_access_macros({"pack"});
  std::string three = emit_access_macros({"pack", "unpack", "TCL_obj"});
  auto count = [](const std::string& s, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = s.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };
  CHECK(count(one, "friend") == 2);    // one per macro
  CHECK(count(three, "friend") == 6);  // three per macro
  CHECK(three.find("TCL_obj<>(TCL_obj_t *") != std::string::npos);
}

TEST_CASE("descriptor file carries the runtime include and separators") {
  Registry reg = registry_of("struct A { int a; };\nstruct B { int b; };\n");
  std::string text =
      emit_descriptor_file({plan_of(reg, "A"), plan_of(reg, "B")}, "unpack");
  CHECK(text.find("#include \"unpack_base.h\"\n") == 0);
  CHECK(text.find("void unpack(unpack_t *p, string nm, A& v)") !=
        std::string::npos);
  CHECK(text.find("void unpack(unpack_t *p, string nm, B& v)") !=
        std::string::npos);
}

// ---- source rewriting ----

TEST_CASE("class with an implicit private region gets the macro") {
  RewriteResult r = insert_access_macros("class C { int a; public: };\n");
  CHECK(r.changed);
  REQUIRE(r.edits.size() == 1);
  CHECK(r.output.find("CLASSDESC_ACCESS(C);") != std::string::npos);
  // Inserted right after the opening brace, before the first member.
  CHECK(r.output.find("CLASSDESC_ACCESS(C);") < r.output.find("int a"));
}

TEST_CASE("all-public struct is untouched") {
  std::string src = "struct S { int a; };\n";
  RewriteResult r = insert_access_macros(src);
  CHECK(!r.changed);
  CHECK(r.output == src);
  CHECK(r.edits.empty());
}

TEST_CASE("struct with a protected label gets the macro") {
  RewriteResult r =
      insert_access_macros("struct S {\n int a;\nprotected:\n int b;\n};\n");
  CHECK(r.changed);
  CHECK(r.output.find("CLASSDESC_ACCESS(S);") != std::string::npos);
}

TEST_CASE("insertion is idempotent") {
  RewriteResult first =
      insert_access_macros("class C {\n  int a;\npublic:\n  int b;\n};\n");
  REQUIRE(first.changed);
  RewriteResult second = insert_access_macros(first.output);
  CHECK(!second.changed);
  CHECK(second.output == first.output);
}

TEST_CASE("template classes get the template macro form") {
  RewriteResult r = insert_access_macros(
      "template <class T>\nclass holder {\n  T item;\n};\n");
  CHECK(r.changed);
  CHECK(r.output.find("CLASSDESC_ACCESS_TEMPLATE(holder);") != std::string::npos);
}

TEST_CASE("unbalanced braces rewrite nothing") {
  std::string src = "class broken {\n  int a;\n";
  RewriteResult r = insert_access_macros(src);
  CHECK(!r.changed);
  CHECK(r.output == src);
  CHECK(r.edits.empty());
  REQUIRE(!r.diagnostics.empty());
  CHECK(has_errors(r.diagnostics));
}

TEST_CASE("diff against input is only inserted macro lines") {
  std::string src =
      "// keep this comment\n"
      "class C {\n"
      "\tint tabbed;\n"
      "public:\n"
      "\tint open;\n"
      "};\n"
      "struct plain { int p; };\n";
  RewriteResult r = insert_access_macros(src);
  REQUIRE(r.changed);

  // Dropping every line that contains the macro must restore the input.
  std::string filtered;
  std::size_t pos = 0;
  while (pos <= r.output.size()) {
    std::size_t eol = r.output.find('\n', pos);
    std::string line = r.output.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    bool macro_line = line.find("CLASSDESC_ACCESS") != std::string::npos;
    if (!macro_line) {
      filtered += line;
      if (eol != std::string::npos) filtered += '\n';
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  CHECK(filtered == src);
}

TEST_CASE("nested private classes each get one macro") {
  RewriteResult r = insert_access_macros(
      "class Outer {\n"
      "  class Inner {\n"
      "    int deep;\n"
      "  };\n"
      "  int shallow;\n"
      "};\n");
  CHECK(r.changed);
  CHECK(r.edits.size() == 2);
  CHECK(r.output.find("CLASSDESC_ACCESS(Outer);") != std::string::npos);
  CHECK(r.output.find("CLASSDESC_ACCESS(Inner);") != std::string::npos);
}

TEST_CASE("fix_headers copies only patched files") {
  testsupport::TempDir corpus;
  testsupport::TempDir out;
  testsupport::write_file(corpus / "private.h",
                          "class P {\n  int secret;\n};\n");
  testsupport::write_file(corpus / "public.h", "struct Q { int open; };\n");
  testsupport::write_file(corpus.path() / "sub" / "nested.h",
                          "class R {\nprotected:\n  int n;\n};\n");

  FixSummary s = fix_headers(corpus.path(), out.path());
  CHECK(s.scanned == 3);
  CHECK(s.patched == 2);
  CHECK(std::filesystem::exists(out / "private.h"));
  CHECK(!std::filesystem::exists(out / "public.h"));
  CHECK(std::filesystem::exists(out.path() / "sub" / "nested.h"));

  std::string patched = testsupport::read_file(out / "private.h");
  CHECK(patched.find("CLASSDESC_ACCESS(P);") != std::string::npos);
}

TEST_CASE("fix_headers on an empty corpus reports zeros") {
  testsupport::TempDir corpus;
  testsupport::TempDir out;
  FixSummary s = fix_headers(corpus.path(), out.path());
  CHECK(s.scanned == 0);
  CHECK(s.patched == 0);
}

TEST_CASE("fix_headers skips files already carrying the macro") {
  testsupport::TempDir corpus;
  testsupport::TempDir out;
  testsupport::write_file(
      corpus / "done.h",
      "class D {\n  CLASSDESC_ACCESS(D);\n  int secret;\n};\n");
  FixSummary s = fix_headers(corpus.path(), out.path());
  CHECK(s.scanned == 1);
  CHECK(s.patched == 0);
  CHECK(!std::filesystem::exists(out / "done.h"));
}
