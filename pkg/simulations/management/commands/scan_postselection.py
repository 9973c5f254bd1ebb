from simulations.management.commands._base import SimulationCommand


class Command(SimulationCommand):
    help = "Bell parameter and feasibility vs postselection threshold (CSV)."

    def run_engine(self, engine):
        return engine.scan_postselection()
