#ifndef PERSUASION_BENCHKIT_TEMPLATES_H_
#define PERSUASION_BENCHKIT_TEMPLATES_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace persuasion::benchkit {

using TemplateVars = std::map<std::string, std::string>;

struct PromptTemplate {
  std::string template_id;
  std::string body;
  std::set<std::string> required;

  // Substitutes every {name} for a required name. Throws RegistryError
  // naming the first required placeholder missing from `vars`.
  std::string Render(const TemplateVars& vars) const;
};

// Names inside {...} in `body`. A placeholder has no braces or newlines
// inside it.
std::set<std::string> FindPlaceholders(const std::string& body);

// Parses a template file: a "---" front-matter block with `id:` and a
// comma-separated `required:` list, then the body. The required list must
// equal the placeholders present in the body.
PromptTemplate ParseTemplate(const std::string& text,
                             const std::string& origin = "<memory>");

class TemplateRegistry {
 public:
  TemplateRegistry() = default;

  // Loads every *.txt file in `dir`.
  static TemplateRegistry Load(const std::filesystem::path& dir);
  // Directory compiled in at build time.
  static const TemplateRegistry& Default();
  static std::filesystem::path DefaultDirectory();

  void Add(PromptTemplate tmpl);
  bool Has(const std::string& id) const;
  // RegistryError for an unknown id.
  const PromptTemplate& Get(const std::string& id) const;
  std::string Render(const std::string& id, const TemplateVars& vars) const;
  std::vector<std::string> Ids() const;

 private:
  std::map<std::string, PromptTemplate> templates_;
};

}  // namespace persuasion::benchkit

#endif  // PERSUASION_BENCHKIT_TEMPLATES_H_
