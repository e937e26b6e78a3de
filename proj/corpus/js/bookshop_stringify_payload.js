function placeOrder(name, lines) {
  var body = JSON.stringify({customer: name, items: lines});
  $.ajax({
    url: 'https://api.bookshop.test/api/orders',
    type: 'POST',
    contentType: 'application/json',
    data: body
  });
}
