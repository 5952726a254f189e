pub mod arch_numerics;
pub mod exact;
pub mod heights;
pub mod lfunc;
pub mod local_nonarch;
pub mod numberfield;
pub mod padic_oracle;
pub mod report;
pub mod special;
pub mod verify;
