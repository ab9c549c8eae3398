#pragma once

#include "secav/calculus.hpp"
#include "secav/json_io.hpp"
#include "secav/prover.hpp"
#include "secav/semantics.hpp"
#include "secav/service.hpp"
#include "secav/syntax.hpp"
#include "secav/tableau.hpp"
#include "secav/textio.hpp"
