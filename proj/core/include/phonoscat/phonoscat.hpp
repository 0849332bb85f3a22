#pragma once

#include "phonoscat/constants.hpp"
#include "phonoscat/coupling.hpp"
#include "phonoscat/elastodynamics.hpp"
#include "phonoscat/errors.hpp"
#include "phonoscat/linalg.hpp"
#include "phonoscat/materials.hpp"
#include "phonoscat/mitigation.hpp"
#include "phonoscat/quadrature.hpp"
#include "phonoscat/radiation.hpp"
#include "phonoscat/transducer.hpp"
