// Copyright 2026 The slsmig Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "slsmig/python_ast.hpp"

#define PY_SSIZE_T_CLEAN
#include <Python.h>

#include <mutex>

namespace slsmig::python {
namespace {

constexpr const char* kBridge = R"py(
import ast, json, math

def _conv(node):
    if isinstance(node, ast.AST):
        out = {"_t": type(node).__name__}
        for name, value in ast.iter_fields(node):
            out[name] = _conv(value)
        for attr in ("lineno", "end_lineno", "col_offset"):
            if hasattr(node, attr):
                out[attr] = getattr(node, attr)
        return out
    if isinstance(node, list):
        return [_conv(x) for x in node]
    if node is None or isinstance(node, (bool, int, str)):
        return node
    if isinstance(node, float):
        return node if math.isfinite(node) else repr(node)
    if isinstance(node, bytes):
        return node.decode("latin-1")
    return repr(node)

def slsmig_parse(source, filename, want_tree):
    try:
        tree = ast.parse(source, filename=filename)
    except SyntaxError as e:
        return json.dumps({"error": e.msg, "lineno": e.lineno or 0, "offset": e.offset or 0})
    except (ValueError, RecursionError) as e:
        return json.dumps({"error": str(e), "lineno": 0, "offset": 0})
    if not want_tree:
        return "{}"
    return json.dumps({"tree": _conv(tree)})

def slsmig_yaml(source, filename, unused):
    try:
        import yaml
    except ImportError:
        return json.dumps({"unavailable": True})
    loader = getattr(yaml, "CSafeLoader", yaml.SafeLoader)
    try:
        for _ in yaml.compose_all(source, Loader=loader):
            pass
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        msg = getattr(e, "problem", None) or str(e)
        return json.dumps({"error": msg, "lineno": mark.line + 1 if mark else 0,
                           "offset": mark.column + 1 if mark else 0})
    return "{}"
)py";

class Interpreter {
 public:
  static Interpreter& instance() {
    static Interpreter interp;
    return interp;
  }

  std::string call(std::string_view source, std::string_view filename, bool want_tree) {
    return invoke(parse_fn_, source, filename, want_tree);
  }

  std::string call_yaml(std::string_view source) { return invoke(yaml_fn_, source, "<yaml>", false); }

 private:
  std::string invoke(PyObject* fn, std::string_view source, std::string_view filename, bool want_tree) {
    std::lock_guard<std::mutex> lock(mu_);
    PyGILState_STATE gil = PyGILState_Ensure();
    std::string out;
    PyObject* src = PyUnicode_DecodeUTF8(source.data(), static_cast<Py_ssize_t>(source.size()), "replace");
    PyObject* name = PyUnicode_FromStringAndSize(filename.data(), static_cast<Py_ssize_t>(filename.size()));
    PyObject* result = nullptr;
    if (src && name) {
      result = PyObject_CallFunction(fn, "OOi", src, name, want_tree ? 1 : 0);
    }
    if (result && PyUnicode_Check(result)) {
      out = PyUnicode_AsUTF8(result);
    } else {
      PyErr_Clear();
      out = R"({"error": "internal parser failure", "lineno": 0, "offset": 0})";
    }
    Py_XDECREF(result);
    Py_XDECREF(src);
    Py_XDECREF(name);
    PyGILState_Release(gil);
    return out;
  }

  Interpreter() {
    if (!Py_IsInitialized()) {
      Py_InitializeEx(0);
      // Release the GIL taken by initialization; calls re-acquire it.
      PyEval_SaveThread();
    }
    PyGILState_STATE gil = PyGILState_Ensure();
    PyObject* globals = PyDict_New();
    PyDict_SetItemString(globals, "__builtins__", PyEval_GetBuiltins());
    PyObject* r = PyRun_String(kBridge, Py_file_input, globals, globals);
    if (!r) {
      PyErr_Print();
      PyGILState_Release(gil);
      throw Error(ErrorCode::kIo, "failed to initialise embedded Python parser");
    }
    Py_DECREF(r);
    parse_fn_ = PyDict_GetItemString(globals, "slsmig_parse");
    Py_XINCREF(parse_fn_);
    yaml_fn_ = PyDict_GetItemString(globals, "slsmig_yaml");
    Py_XINCREF(yaml_fn_);
    globals_ = globals;
    PyGILState_Release(gil);
  }

  std::mutex mu_;
  PyObject* globals_ = nullptr;
  PyObject* parse_fn_ = nullptr;
  PyObject* yaml_fn_ = nullptr;
};

SyntaxProblem to_problem(const Json& j) {
  SyntaxProblem p;
  p.message = j.value("error", std::string("syntax error"));
  p.line = j.value("lineno", 0);
  p.column = j.value("offset", 0);
  return p;
}

}  // namespace

ParseResult parse(std::string_view source, std::string_view filename) {
  Json j = Json::parse(Interpreter::instance().call(source, filename, true));
  ParseResult r;
  if (j.contains("error")) {
    r.error = to_problem(j);
  } else {
    r.tree = std::move(j["tree"]);
  }
  return r;
}

std::optional<SyntaxProblem> check_syntax(std::string_view source, std::string_view filename) {
  Json j = Json::parse(Interpreter::instance().call(source, filename, false));
  if (j.contains("error")) return to_problem(j);
  return std::nullopt;
}

std::optional<SyntaxProblem> check_yaml(std::string_view source) {
  Json j = Json::parse(Interpreter::instance().call_yaml(source));
  if (j.contains("error")) return to_problem(j);
  return std::nullopt;
}

}  // namespace slsmig::python
