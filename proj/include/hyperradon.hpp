#ifndef HYPERRADON_HPP
#define HYPERRADON_HPP

#include "hyperradon/analysis.hpp"
#include "hyperradon/config.hpp"
#include "hyperradon/error.hpp"
#include "hyperradon/field.hpp"
#include "hyperradon/geometry.hpp"
#include "hyperradon/laplacian.hpp"
#include "hyperradon/params.hpp"
#include "hyperradon/quadrature.hpp"
#include "hyperradon/report.hpp"
#include "hyperradon/testfuncs.hpp"
#include "hyperradon/transforms.hpp"
#include "hyperradon/verify.hpp"
#include "hyperradon/version.hpp"

#endif // HYPERRADON_HPP
