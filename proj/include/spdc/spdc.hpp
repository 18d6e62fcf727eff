#pragma once

#include "spdc/aperture.hpp"
#include "spdc/core.hpp"
#include "spdc/crystal.hpp"
#include "spdc/interference.hpp"
#include "spdc/optics.hpp"
#include "spdc/oracle.hpp"
#include "spdc/presets.hpp"
#include "spdc/prism.hpp"
#include "spdc/pumpgeom.hpp"
#include "spdc/scenario.hpp"
#include "spdc/sellmeier.hpp"
