from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    # Numerical tolerances
    residual_tol: float = 1e-10
    coefficient_zero_tol: float = 1e-14
    degeneracy_tol: float = 1e-7
    imag_tol: float = 1e-9
    null_tol: float = 1e-7
    type2_residual_tol: float = 1e-6
    validation_tol: float = 1e-9
    probability_floor: float = 1e-12
    volume_floor: float = 1e-12
    spectrum_zero_tol: float = 1e-13

    # Root finder
    aberth_max_iter: int = 200
    aberth_restarts: int = 3
    random_seed: int = 7

    # Size guards
    register_max_qubits: int = 14
    symmetrize_max_qubits: int = 8
    sweep_max_qubits: int = 200
    root_scale_limit: float = 1e8

    # Output
    output_digits: int = 17
    mesh_azimuth: int = 64
    mesh_polar: int = 32
    sweep_workers: int = 4
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="SYMSTEER_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
