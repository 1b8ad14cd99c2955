#pragma once

#include "miniqt/common.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace miniqt::opmodel {

/// Index of the operational-model library: which file backs each include
/// name, and which assertion messages each model method must carry.
struct ModelCatalog {
    std::filesystem::path directory;
    std::map<std::string, std::filesystem::path> models;
    /// Mangled method name -> required `__VERIFIER_assert` messages.
    std::map<std::string, std::vector<std::string>> requiredAssertions;
};

/// Parses a catalog file made of `Name = file` and
/// `require <mangled-method> "<message>"` lines; `#` starts a comment.
/// Model paths are relative to the catalog's directory.
/// Throws miniqt::Error("CatalogError") with the offending line number.
ModelCatalog load_catalog(const std::string &path);
ModelCatalog parse_catalog(const std::string &text, const std::filesystem::path &directory);

/// Checks that every model parses and type-checks stand-alone (templates
/// instantiated at int) and that every required assertion is present with
/// its exact message. Returns one diagnostic per problem, e.g.
/// `missing-required-assertion QList_int::front`.
std::vector<std::string> validate_models(const ModelCatalog &catalog, const VerifierConfig &config);

} // namespace miniqt::opmodel
