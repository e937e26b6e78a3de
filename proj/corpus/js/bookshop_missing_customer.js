var cart = [{isbn: '9780262510875', quantity: 2}];

function checkout() {
  $.ajax({
    url: 'https://api.bookshop.test/api/orders',
    method: 'POST',
    data: {items: cart}
  });
}
