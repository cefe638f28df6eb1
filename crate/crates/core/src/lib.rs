// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! ZW string diagrams with exact integer semantics.

pub mod cli;
pub mod diagram;
pub mod fuzz;
pub mod normal_form;
pub mod render;
pub mod rules;
pub mod semantics;

pub use diagram::{Diagram, Dir, Port, Strands, VertexKind};
pub use semantics::{eval, Ring, Tensor};
