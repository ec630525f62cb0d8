#pragma once

#include "berkovich.hpp"
#include "iteration.hpp"
#include "measures.hpp"
#include "moduli_git.hpp"
#include "puiseux.hpp"
#include "stability.hpp"
