#pragma once

#include <string>

#include "presentation.hpp"

namespace relpres {

RelativePresentation presentation_from_json_text(const std::string& text);
std::string presentation_to_json_text(const RelativePresentation& p);

RelativePresentation load_presentation(const std::string& path);
void save_presentation(const RelativePresentation& p, const std::string& path);

}  // namespace relpres
