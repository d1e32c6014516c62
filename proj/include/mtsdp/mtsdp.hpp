#pragma once

// Umbrella header for the mtsdp library: a primal-dual interior point method
// for nonlinear semidefinite programs built on square-root-scaled search
// directions, with regularity diagnostics and benchmark instances.

#include "mtsdp/errors.hpp"
#include "mtsdp/symmat.hpp"
#include "mtsdp/model.hpp"
#include "mtsdp/scaling.hpp"
#include "mtsdp/newton.hpp"
#include "mtsdp/pathfollow.hpp"
#include "mtsdp/regularity.hpp"
#include "mtsdp/instances.hpp"
#include "mtsdp/verify.hpp"
#include "mtsdp/report.hpp"
