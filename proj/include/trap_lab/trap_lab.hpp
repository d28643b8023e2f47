#pragma once

#include "trap_lab/channels.hpp"
#include "trap_lab/classical.hpp"
#include "trap_lab/error.hpp"
#include "trap_lab/fields.hpp"
#include "trap_lab/output.hpp"
#include "trap_lab/pipeline.hpp"
#include "trap_lab/scenario.hpp"
#include "trap_lab/specfun.hpp"
#include "trap_lab/spectra.hpp"
#include "trap_lab/tunneling.hpp"
