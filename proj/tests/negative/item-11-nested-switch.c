int main() {
    int x;
    x = 1;
    switch (x) {
    case 1:
        switch (x) {
        case 1:
            return 7;
        default:
            break;
        }
        break;
    default:
        break;
    }
    return 0;
}
