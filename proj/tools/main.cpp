#include "smms/cli.hpp"

int main(int argc, char** argv)
{
    return smms::cli::dispatch(argc, argv);
}
