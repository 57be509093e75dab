#pragma once

#include "morse/config.hpp"
#include "morse/cwcomplex.hpp"

#include <filesystem>
#include <string>

namespace morse {

inline constexpr int kDocumentVersion = 1;

/// A filtration as stored on disk, together with the config that produced it.
struct FiltrationDocument {
  MorseFiltration filtration;
  PipelineConfig config;
};

/// JSON text: {"format", "version", "config", "metadata", "cells": [{id, dim,
/// density, boundary, geometry}]}. Doubles round-trip exactly.
std::string serialize_document(const FiltrationDocument& document);

/// Throws ParseError on malformed JSON, unknown config keys, duplicate ids,
/// dangling boundary references or densities that increase down the list.
FiltrationDocument parse_document(const std::string& text);

FiltrationDocument read_document(const std::filesystem::path& path);
void write_document(const FiltrationDocument& document, const std::filesystem::path& path);

}  // namespace morse
