#include "persuasion/benchkit/templates.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "persuasion/common/errors.h"
#include "persuasion/common/jsonl.h"

#ifndef PERSUASION_TEMPLATE_DIR
#define PERSUASION_TEMPLATE_DIR "templates"
#endif

namespace persuasion::benchkit {
namespace {

std::string Trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Calls fn(start, end, name) for each placeholder occurrence.
template <typename Fn>
void ScanPlaceholders(const std::string& body, Fn&& fn) {
  std::size_t i = 0;
  while ((i = body.find('{', i)) != std::string::npos) {
    std::size_t j = i + 1;
    while (j < body.size() && body[j] != '}' && body[j] != '{' && body[j] != '\n') {
      ++j;
    }
    if (j < body.size() && body[j] == '}' && j > i + 1) {
      fn(i, j + 1, body.substr(i + 1, j - i - 1));
      i = j + 1;
    } else {
      i = j;
    }
  }
}

}  // namespace

std::set<std::string> FindPlaceholders(const std::string& body) {
  std::set<std::string> out;
  ScanPlaceholders(body, [&](std::size_t, std::size_t, std::string name) {
    out.insert(std::move(name));
  });
  return out;
}

std::string PromptTemplate::Render(const TemplateVars& vars) const {
  for (const auto& name : required) {
    if (!vars.count(name)) {
      throw RegistryError("template '" + template_id +
                          "' missing value for placeholder {" + name + "}");
    }
  }
  std::string out;
  std::size_t last = 0;
  ScanPlaceholders(body, [&](std::size_t start, std::size_t end,
                             const std::string& name) {
    if (!required.count(name)) return;
    out.append(body, last, start - last);
    out += vars.at(name);
    last = end;
  });
  out.append(body, last, std::string::npos);
  return out;
}

PromptTemplate ParseTemplate(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || Trim(line) != "---") {
    throw RegistryError(origin + ": missing front-matter");
  }
  PromptTemplate t;
  bool have_required = false;
  bool closed = false;
  while (std::getline(in, line)) {
    if (Trim(line) == "---") {
      closed = true;
      break;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw RegistryError(origin + ": bad front-matter line '" + line + "'");
    }
    std::string key = Trim(line.substr(0, colon));
    std::string value = Trim(line.substr(colon + 1));
    if (key == "id") {
      t.template_id = value;
    } else if (key == "required") {
      have_required = true;
      std::stringstream parts(value);
      std::string part;
      while (std::getline(parts, part, ',')) {
        part = Trim(part);
        if (!part.empty()) t.required.insert(part);
      }
    }
  }
  if (!closed || t.template_id.empty() || !have_required) {
    throw RegistryError(origin + ": front-matter needs id and required");
  }
  std::string body((std::istreambuf_iterator<char>(in)), {});
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
    body.pop_back();
  }
  t.body = std::move(body);
  auto found = FindPlaceholders(t.body);
  if (found != t.required) {
    std::string detail;
    for (const auto& n : found) {
      if (!t.required.count(n)) detail += " undeclared {" + n + "}";
    }
    for (const auto& n : t.required) {
      if (!found.count(n)) detail += " unused {" + n + "}";
    }
    throw RegistryError(origin + ": placeholder mismatch:" + detail);
  }
  return t;
}

TemplateRegistry TemplateRegistry::Load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw RegistryError("template directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  TemplateRegistry reg;
  for (const auto& f : files) {
    reg.Add(ParseTemplate(ReadTextFile(f), f.string()));
  }
  return reg;
}

std::filesystem::path TemplateRegistry::DefaultDirectory() {
  if (const char* env = std::getenv("PERSUASION_TEMPLATES")) return env;
  return PERSUASION_TEMPLATE_DIR;
}

const TemplateRegistry& TemplateRegistry::Default() {
  static const TemplateRegistry reg = Load(DefaultDirectory());
  return reg;
}

void TemplateRegistry::Add(PromptTemplate tmpl) {
  if (templates_.count(tmpl.template_id)) {
    throw RegistryError("duplicate template id '" + tmpl.template_id + "'");
  }
  std::string id = tmpl.template_id;
  templates_.emplace(std::move(id), std::move(tmpl));
}

bool TemplateRegistry::Has(const std::string& id) const {
  return templates_.count(id) > 0;
}

const PromptTemplate& TemplateRegistry::Get(const std::string& id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw RegistryError("unknown template '" + id + "'");
  }
  return it->second;
}

std::string TemplateRegistry::Render(const std::string& id,
                                     const TemplateVars& vars) const {
  return Get(id).Render(vars);
}

std::vector<std::string> TemplateRegistry::Ids() const {
  std::vector<std::string> out;
  for (const auto& [id, t] : templates_) out.push_back(id);
  return out;
}

}  // namespace persuasion::benchkit
