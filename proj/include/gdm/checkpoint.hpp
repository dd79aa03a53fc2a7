#pragma once

#include <string>

#include "gdm/classifier.hpp"
#include "gdm/gsae.hpp"

namespace gdm {

// Versioned structured-text weight dumps. Values are written as C99 hex
// floats, so save -> load round-trips every weight bit for bit.
void save_classifier(const ClassifierModel& model, const std::string& path);
ClassifierModel load_classifier(const std::string& path);

void save_gsae(const GsaeModel& model, const std::string& path);
GsaeModel load_gsae(const std::string& path);

}  // namespace gdm
