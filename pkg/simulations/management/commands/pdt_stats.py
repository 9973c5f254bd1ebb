from simulations.management.commands._base import SimulationCommand


class Command(SimulationCommand):
    help = "Moments, exceedances and histogram of a transmittance model (CSV)."

    def run_engine(self, engine):
        return engine.pdt_stats()
