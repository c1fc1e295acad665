from dotenv import load_dotenv
load_dotenv()

from src.components.jobs.commands import cli


def main():
    cli(prog_name="shiftlab")


if __name__ == "__main__":
    main()
